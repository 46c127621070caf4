"""
Factor SU(N) matrices into chains of SU(2) blocks on adjacent channel pairs,
and multiply chains back out.

Three factorizations are offered:

- ``decompose_sun``: Givens-style nulling of the below-diagonal entries,
  N(N-1)/2 factors, either column by column (left multiplication) or row by
  row (right multiplication).
- ``decompose_su3_pattern``: the three-factor (2,3).(1,2).(2,3) product.
- ``decompose_su4_pattern``: the seven-factor
  (2,3).(3,4).(2,3).(1,2).(2,3).(3,4).(2,3) product.

Each nulling step leaves the surviving entry real and positive, so the
working matrix ends as the identity and no separate diagonal phase layer is
needed.
"""
import logging
from collections import Counter
from typing import List, Optional, Tuple

import numpy as np

from src.types.chain import (
    ElementCount, FactorChain, FactorKind, NullingOrder, SU2Factor,
    create_factor_chain, create_su2_factor, validate_nulling_order,
)
from src.types.unitary import (
    UnitaryMatrix, ChannelPair, SU2Params, BeamSplitterParams, _frozen_array,
)
from src.services.unitary_core import (
    su2_from_euler, beam_splitter, real_rotation, su2_to_euler, beam_splitter_params, embed,
)
from src.utils.error_handler import (
    DecompositionError, InvalidChainError, ValidationError, validate_dimension,
)
from src.utils.numerics import (
    UNITARY_TOLERANCE, NULL_TOLERANCE, determinant_defect, max_abs_diff, safe_arg,
    unitarity_defect,
)


DECOMPOSE_TOLERANCE = 1e-9

SU3_PATTERN: Tuple[Tuple[int, int], ...] = ((2, 3), (1, 2), (2, 3))
SU4_PATTERN: Tuple[Tuple[int, int], ...] = (
    (2, 3), (3, 4), (2, 3), (1, 2), (2, 3), (3, 4), (2, 3),
)

# Reverses two channels; conjugating a 2x2 block by it swaps its channel roles.
_SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


# --------------------------------------------------------------------------
# Factors and chains
# --------------------------------------------------------------------------

def factor_block(factor: SU2Factor) -> UnitaryMatrix:
    """The 2x2 special unitary a factor stands for."""
    p1, p2, p3 = factor.params
    if factor.kind == 'euler':
        return su2_from_euler(SU2Params(p1, p2, p3))
    if factor.kind == 'beamsplitter':
        return beam_splitter(BeamSplitterParams(p1, p2, p3))
    return real_rotation(p1)


def materialize(factor: SU2Factor, n: Optional[int] = None) -> UnitaryMatrix:
    """
    Embed a factor into the n x n identity.

    Raises:
        InvalidChainError: If the factor's pair does not fit n channels
    """
    n = factor.pair.n if n is None else n
    if factor.pair.j > n:
        raise InvalidChainError(
            f"Factor on pair ({factor.pair.i},{factor.pair.j}) does not fit {n} channels",
            details={'n': n}
        )
    return embed(factor_block(factor), ChannelPair(factor.pair.i, factor.pair.j, n))


def recompose(c: FactorChain) -> UnitaryMatrix:
    """
    Ordered product factors[0] . factors[1] . ... of the embedded factors.

    Raises:
        InvalidChainError: If a factor's pair does not fit the chain's channel count
    """
    result = np.eye(c.n, dtype=complex)
    for index, factor in enumerate(c.factors):
        if not 1 <= factor.pair.i < factor.pair.j <= c.n:
            raise InvalidChainError(
                f"Factor {index} on pair ({factor.pair.i},{factor.pair.j}) does not fit {c.n} channels",
                details={'index': index, 'n': c.n}
            )
        i, j = factor.pair.indices
        cols = [i, j]
        result[:, cols] = result[:, cols] @ factor_block(factor).matrix
    return UnitaryMatrix(_frozen_array(result), True)


def round_trip_residual(u: UnitaryMatrix, c: FactorChain) -> float:
    """Max-norm distance between U and the recomposed chain."""
    validate_dimension(u.dim, c.n, 'chain')
    return max_abs_diff(recompose(c).matrix, u.matrix)


def element_count(c: FactorChain) -> ElementCount:
    """Tally factors by channel pair and by kind."""
    return ElementCount(
        by_pair=Counter((f.pair.i, f.pair.j) for f in c.factors),
        by_kind=Counter(f.kind for f in c.factors),
        total=len(c.factors),
    )


def _factor(block: np.ndarray, pair: Tuple[int, int], n: int, kind: FactorKind) -> SU2Factor:
    u = UnitaryMatrix(_frozen_array(block), True)
    if kind == 'euler':
        params = su2_to_euler(u).to_list()
    else:
        params = beam_splitter_params(u).to_list()
    return create_su2_factor(pair, kind, params, n)


def _su2_with_column(x: complex, y: complex) -> np.ndarray:
    """SU(2) block whose first column is the unit vector (x, y)."""
    return np.array([[x, -np.conj(y)], [y, np.conj(x)]], dtype=complex)


def _require_special(u: UnitaryMatrix, tolerance: float) -> np.ndarray:
    matrix = np.asarray(u.matrix, dtype=complex)
    defect = max(unitarity_defect(matrix), determinant_defect(matrix))
    if defect > tolerance:
        raise ValidationError(
            f"Decomposition needs a special unitary (defect {defect:.3e} > {tolerance:.1e})",
            field='entries',
            details={'defect': defect}
        )
    return matrix


# --------------------------------------------------------------------------
# Givens nulling
# --------------------------------------------------------------------------

def complex_givens(x: complex, y: complex) -> np.ndarray:
    """
    SU(2) block G with G . (x, y)^T = (rho, 0)^T, rho = sqrt(|x|^2 + |y|^2).

    A y below the null tolerance is treated as zero, which leaves a pure
    phase block making x real; if both entries vanish the identity is returned.
    """
    if abs(y) < NULL_TOLERANCE:
        y = 0.0
        if abs(x) < NULL_TOLERANCE:
            return np.eye(2, dtype=complex)
    rho = np.sqrt(abs(x) ** 2 + abs(y) ** 2)
    return np.array([[np.conj(x), np.conj(y)], [-y, x]], dtype=complex) / rho


def row_givens(p: complex, q: complex) -> np.ndarray:
    """SU(2) block T with (p, q) . T = (0, rho), the right-acting twin of complex_givens."""
    if abs(p) < NULL_TOLERANCE:
        p = 0.0
        if abs(q) < NULL_TOLERANCE:
            return np.eye(2, dtype=complex)
    rho = np.sqrt(abs(p) ** 2 + abs(q) ** 2)
    return np.array([[q, np.conj(p)], [-p, np.conj(q)]], dtype=complex) / rho


def _null_columns(w: np.ndarray, kind: FactorKind) -> List[SU2Factor]:
    n = w.shape[0]
    applied = []
    for c in range(n - 1):
        for r in range(n - 1, c, -1):
            rows = [r - 1, r]
            g = complex_givens(w[r - 1, c], w[r, c])
            w[rows, :] = g @ w[rows, :]
            applied.append(_factor(g.conj().T, (r, r + 1), n, kind))
    # G_K ... G_1 U = I, hence U = G_1^dagger ... G_K^dagger
    return applied


def _null_rows(w: np.ndarray, kind: FactorKind) -> List[SU2Factor]:
    n = w.shape[0]
    applied = []
    for r in range(n - 1, 0, -1):
        for c in range(r):
            cols = [c, c + 1]
            t = row_givens(w[r, c], w[r, c + 1])
            w[:, cols] = w[:, cols] @ t
            applied.append(_factor(t.conj().T, (c + 1, c + 2), n, kind))
    # U T_1 ... T_K = I, hence U = T_K^dagger ... T_1^dagger
    return applied[::-1]


def decompose_sun(u: UnitaryMatrix, order: NullingOrder = 'columns',
                  kind: FactorKind = 'euler',
                  tolerance: float = UNITARY_TOLERANCE) -> FactorChain:
    """
    Factor an SU(N) matrix into N(N-1)/2 adjacent-pair SU(2) blocks.

    Args:
        u: Special unitary to factor
        order: "columns" nulls each column bottom-up by left multiplication,
            "rows" nulls each row left-to-right by right multiplication
        kind: Parameterization of the emitted factors
        tolerance: Special-unitarity tolerance on the input

    Returns:
        Chain with recompose(chain) == U

    Raises:
        ValidationError: If U is not special unitary or the order is unknown
    """
    validate_nulling_order(order)
    if kind == 'real_rotation':
        raise ValidationError("Nulling emits complex blocks; use 'euler' or 'beamsplitter'", field='kind')
    w = _require_special(u, tolerance).copy()
    factors = _null_columns(w, kind) if order == 'columns' else _null_rows(w, kind)

    leftover = max_abs_diff(w, np.eye(w.shape[0]))
    logging.debug(f"decompose_sun: N={w.shape[0]}, order={order}, "
                  f"{len(factors)} factors, leftover diagonal defect {leftover:.2e}")
    return create_factor_chain(w.shape[0], factors)


# --------------------------------------------------------------------------
# Fixed patterns
# --------------------------------------------------------------------------

def _solve_sandwich(w: np.ndarray, real_middle: bool) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Split a 3x3 special unitary as A(2,3) . M(1,2) . B(2,3).

    M is fixed by the first column; ``real_middle`` pins its reflected phase
    to 0 and moves that phase into A. Returns the three 2x2 blocks.
    """
    v = w[1:, 0]
    sin_t = float(np.linalg.norm(v))
    phi_t = safe_arg(w[0, 0], NULL_TOLERANCE)
    theta = float(np.arctan2(sin_t, abs(w[0, 0])))

    if sin_t < NULL_TOLERANCE:
        phi_r = 0.0
        a = np.eye(2, dtype=complex)
    else:
        phi_r = 0.0 if real_middle else safe_arg(v[0], NULL_TOLERANCE)
        column = np.exp(-1j * phi_r) * v / sin_t
        a = _su2_with_column(column[0], column[1])

    m = beam_splitter(BeamSplitterParams(phi_t, theta, phi_r)).matrix
    a_full = np.eye(3, dtype=complex)
    a_full[1:, 1:] = a
    m_full = np.eye(3, dtype=complex)
    m_full[:2, :2] = m
    b_full = m_full.conj().T @ a_full.conj().T @ w
    return a, m, b_full[1:, 1:]


def decompose_su3_pattern(u: UnitaryMatrix, tolerance: float = UNITARY_TOLERANCE) -> FactorChain:
    """
    Factor U = A(2,3) . M(1,2) . B(2,3) with a real-mixing middle element
    M = [[e^{ia} cos t, -sin t], [sin t, e^{-ia} cos t]].

    Where |U_11| is 0 or 1 the undetermined angle is set to 0.

    Raises:
        ValidationError: If U is not a 3x3 special unitary
    """
    validate_dimension(3, u.dim, 'matrix')
    w = _require_special(u, tolerance)
    a, m, b = _solve_sandwich(w, real_middle=True)
    blocks = (a, m, b)
    return create_factor_chain(3, [
        _factor(block, pair, 3, 'beamsplitter') for block, pair in zip(blocks, SU3_PATTERN)
    ])


def _left_triple(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Blocks of L = X(2,3) . Y(3,4) . Z(2,3) on three channels with L e_1 = u,
    for a unit u whose first entry is real and non-negative. X is the identity.
    """
    rest = float(np.hypot(abs(u[1]), abs(u[2])))
    angle = float(np.arctan2(rest, u[0].real))
    z = beam_splitter(BeamSplitterParams(0.0, angle, 0.0)).matrix
    if rest < NULL_TOLERANCE:
        y = np.eye(2, dtype=complex)
    else:
        y = _su2_with_column(u[1] / rest, u[2] / rest)
    return np.eye(2, dtype=complex), y, z


def decompose_su4_pattern(u: UnitaryMatrix, tolerance: float = UNITARY_TOLERANCE) -> FactorChain:
    """
    Factor a 4x4 special unitary into seven blocks on the pairs
    (2,3), (3,4), (2,3), (1,2), (2,3), (3,4), (2,3).

    The (1,2) element is fixed by the first column. The three blocks to its
    left carry that column into channels 2-4; the three to its right are
    the remaining SU(3) on channels 2-4, split by the three-factor pattern
    after reversing the channel order.

    Raises:
        ValidationError: If U is not a 4x4 special unitary
    """
    validate_dimension(4, u.dim, 'matrix')
    w = _require_special(u, tolerance)

    v = w[1:, 0]
    sin_t = float(np.linalg.norm(v))
    phi_t = safe_arg(w[0, 0], NULL_TOLERANCE)
    theta = float(np.arctan2(sin_t, abs(w[0, 0])))
    if sin_t < NULL_TOLERANCE:
        phi_r = 0.0
        left = (np.eye(2, dtype=complex),) * 3
    else:
        phi_r = safe_arg(v[0], NULL_TOLERANCE)
        left = _left_triple(np.exp(-1j * phi_r) * v / sin_t)
    middle = beam_splitter(BeamSplitterParams(phi_t, theta, phi_r)).matrix

    left_full = np.eye(4, dtype=complex)
    for block, (i, j) in zip(left, SU4_PATTERN[:3]):
        cols = [i - 1, j - 1]
        left_full[:, cols] = left_full[:, cols] @ block
    middle_full = np.eye(4, dtype=complex)
    middle_full[:2, :2] = middle
    right_full = middle_full.conj().T @ left_full.conj().T @ w

    # Reversing channels 2-4 turns (2,3).(3,4).(2,3) into the sandwich shape;
    # each block comes back conjugated by the swap.
    reverse = np.eye(3, dtype=complex)[::-1]
    mirrored = reverse @ right_full[1:, 1:] @ reverse
    a, m, b = _solve_sandwich(mirrored, real_middle=False)
    right = tuple(_SWAP @ block @ _SWAP for block in (a, m, b))

    blocks = left + (middle,) + right
    return create_factor_chain(4, [
        _factor(block, pair, 4, 'beamsplitter') for block, pair in zip(blocks, SU4_PATTERN)
    ])


def decompose(u: UnitaryMatrix, pattern: str = 'auto', order: NullingOrder = 'columns',
              tolerance: float = UNITARY_TOLERANCE) -> FactorChain:
    """
    Dispatch to a factorization: "su3", "su4", "reck" (Givens nulling) or
    "auto", which picks the fixed pattern for N = 3 and N = 4.

    Raises:
        ValidationError: If the pattern is unknown or does not fit N
    """
    if pattern == 'auto':
        pattern = {3: 'su3', 4: 'su4'}.get(u.dim, 'reck')
    if pattern == 'su3':
        return decompose_su3_pattern(u, tolerance)
    if pattern == 'su4':
        return decompose_su4_pattern(u, tolerance)
    if pattern == 'reck':
        return decompose_sun(u, order, tolerance=tolerance)
    raise ValidationError(f"Unknown decomposition pattern {pattern!r}", field='pattern')


def verify_chain(u: UnitaryMatrix, c: FactorChain,
                 tolerance: float = DECOMPOSE_TOLERANCE) -> float:
    """
    Check a chain against the matrix it was computed from.

    Raises:
        DecompositionError: If the round-trip residual exceeds tolerance
    """
    residual = round_trip_residual(u, c)
    if residual > tolerance:
        raise DecompositionError(
            f"Chain does not reproduce the matrix: residual {residual:.3e} > {tolerance:.1e}",
            residual=residual
        )
    return residual
