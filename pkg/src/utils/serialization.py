"""
JSON documents for factor chains and circuit netlists, and number formatting
for machine-readable output.

Documents are validated with pydantic models; floats are written with
Python's shortest round-trip repr, so reading a document back reproduces
every parameter bit for bit.
"""
import json
import math
import os
from typing import List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError

from src.types.chain import FactorChain, create_factor_chain, create_su2_factor
from src.types.circuit import Circuit, create_circuit, create_optical_element
from src.utils.error_handler import ParseError


class FactorModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    pair: Tuple[int, int]
    kind: Literal["euler", "beamsplitter", "real_rotation"]
    params: Tuple[float, float, float]


class ChainDocument(BaseModel):
    model_config = ConfigDict(extra='forbid')

    n: int = Field(ge=1)
    factors: List[FactorModel] = Field(default_factory=list)


class ElementModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    pair: Tuple[int, int]
    params: Tuple[float, float, float]
    label: str = ""


class NetlistDocument(BaseModel):
    model_config = ConfigDict(extra='forbid')

    n: int = Field(ge=2)
    elements: List[ElementModel] = Field(default_factory=list)


def _dump(document: BaseModel) -> str:
    return json.dumps(document.model_dump(mode='json'), indent=2) + "\n"


def _load(model, text: str, what: str):
    try:
        return model.model_validate_json(text)
    except PydanticValidationError as e:
        raise ParseError(
            f"Invalid {what} document: {e.error_count()} error(s)",
            source=what,
            details={'errors': [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()]}
        )


def chain_to_json(c: FactorChain) -> str:
    """Serialize a chain as {"n": ..., "factors": [{pair, kind, params}, ...]}."""
    document = ChainDocument(
        n=c.n,
        factors=[FactorModel(pair=(f.pair.i, f.pair.j), kind=f.kind, params=f.params) for f in c.factors],
    )
    return _dump(document)


def chain_from_json(text: str) -> FactorChain:
    """
    Parse and validate a chain document.

    Raises:
        ParseError: If the JSON does not match the chain schema
        InvalidChainError: If a pair does not fit the channel count
    """
    document = _load(ChainDocument, text, 'chain')
    factors = [create_su2_factor(f.pair, f.kind, f.params, document.n) for f in document.factors]
    return create_factor_chain(document.n, factors)


def circuit_to_json(c: Circuit) -> str:
    """Serialize a circuit netlist as {"n": ..., "elements": [{pair, params, label}, ...]}."""
    document = NetlistDocument(
        n=c.n,
        elements=[ElementModel(pair=(e.pair.i, e.pair.j), params=tuple(e.params.to_list()), label=e.label)
                  for e in c.elements],
    )
    return _dump(document)


def circuit_from_json(text: str) -> Circuit:
    """
    Parse and validate a netlist document.

    Raises:
        ParseError: If the JSON does not match the netlist schema
        InvalidChainError: If an element does not fit the channel count
    """
    document = _load(NetlistDocument, text, 'netlist')
    elements = [create_optical_element(e.pair, e.params, document.n, e.label) for e in document.elements]
    return create_circuit(document.n, elements)


def write_text(path: str, text: str) -> None:
    """Write a document, creating parent directories as needed."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


def read_text(path: str) -> str:
    """
    Raises:
        ParseError: If the file does not exist or is not UTF-8 text
    """
    if not os.path.exists(path):
        raise ParseError(f"File not found: {path}", source=path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise ParseError(f"File is not UTF-8 text: {path}", source=path, details={'reason': str(e)})


def format_machine(value: float) -> str:
    """17 significant digits; non-finite values print as "nan"."""
    if value is None or not math.isfinite(value):
        return "nan"
    return f"{value:.17g}"


def format_human(value: float) -> str:
    """6 significant digits for reports."""
    if value is None or not math.isfinite(value):
        return "nan"
    return f"{value:.6g}"
