"""
Text format for matrices and state vectors.

A matrix file holds "N" on the first line, then N lines of N entries written
as "re{sign}im i" (e.g. "0.5-0.25i"). Bare reals are read as zero-imaginary.
"""
import os
import re
from typing import List

import numpy as np

from src.types.unitary import UnitaryMatrix, StateVector, create_unitary, create_state
from src.utils.error_handler import ParseError
from src.utils.numerics import UNITARY_TOLERANCE


_SEPARATORS = re.compile(r"[\s,;]+")


def parse_complex(token: str) -> complex:
    """
    Parse a single entry such as "0.5-0.25i", "-1", "2i" or "1e-3+4e-2j".

    Raises:
        ParseError: If the token is not a complex number
    """
    text = token.strip()
    if text.endswith(('i', 'I')):
        text = text[:-1] + 'j'
    if text in ('j', '+j', '-j'):
        text = text.replace('j', '1j')
    try:
        return complex(text)
    except ValueError:
        raise ParseError(f"Cannot parse complex entry {token!r}", source=token)


def format_complex(z: complex) -> str:
    """Format an entry with 17 significant digits, e.g. "0.5-0.25i"."""
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_matrix_array(text: str, source: str = '<string>') -> np.ndarray:
    """
    Parse matrix text into a complex array without unitarity checks.

    Raises:
        ParseError: On a malformed header, row count or row length
    """
    lines = [line.strip() for line in text.splitlines()
             if line.strip() and not line.lstrip().startswith('#')]
    if not lines:
        raise ParseError(f"{source}: empty matrix file", source=source)
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"{source}: first line must be the dimension N, got {lines[0]!r}", source=source)
    if n < 1:
        raise ParseError(f"{source}: dimension must be positive, got {n}", source=source)
    if len(lines) - 1 != n:
        raise ParseError(
            f"{source}: expected {n} rows, found {len(lines) - 1}",
            source=source,
            details={'expected_rows': n, 'found_rows': len(lines) - 1}
        )

    rows: List[List[complex]] = []
    for number, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(
                f"{source}: line {number} has {len(tokens)} entries, expected {n}",
                source=source,
                details={'line': number}
            )
        rows.append([parse_complex(token) for token in tokens])
    return np.array(rows, dtype=complex)


def parse_matrix(text: str, special: bool = True, tolerance: float = UNITARY_TOLERANCE,
                 source: str = '<string>') -> UnitaryMatrix:
    """Parse matrix text and validate it as a (special) unitary."""
    return create_unitary(parse_matrix_array(text, source), special=special, tolerance=tolerance)


def format_matrix(u: UnitaryMatrix) -> str:
    """Render a matrix in the text format, one row per line."""
    lines = [str(u.dim)]
    for row in u.matrix:
        lines.append(" ".join(format_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def read_matrix(path: str, special: bool = True, tolerance: float = UNITARY_TOLERANCE) -> UnitaryMatrix:
    """
    Read and validate a matrix file.

    Raises:
        ParseError: If the file is missing or malformed
        ValidationError: If the matrix is not (special) unitary
    """
    if not os.path.exists(path):
        raise ParseError(f"Matrix file not found: {path}", source=path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise ParseError(f"Matrix file is not UTF-8 text: {path}", source=path, details={'reason': str(e)})
    return parse_matrix(text, special=special, tolerance=tolerance, source=path)


def write_matrix(path: str, u: UnitaryMatrix) -> None:
    """Write a matrix file, creating parent directories as needed."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_matrix(u))


def parse_state(text: str, normalize: bool = False) -> StateVector:
    """Parse a state written as separated complex entries, e.g. "1,0,0" or "0.6 0.8i"."""
    tokens = [token for token in _SEPARATORS.split(text.strip()) if token]
    if not tokens:
        raise ParseError("Empty state vector", source=text)
    return create_state([parse_complex(token) for token in tokens], normalize=normalize)
