"""
Interferometer circuit types: optical elements and ordered element lists.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from src.types.unitary import BeamSplitterParams, ChannelPair, create_beam_splitter_params, create_channel_pair
from src.utils.error_handler import InvalidChainError, ValidationError


@dataclass(frozen=True)
class OpticalElement:
    """
    A two-channel element; phase shifters are the theta = 0 case.
    """
    pair: ChannelPair
    params: BeamSplitterParams
    label: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"pair": self.pair.to_list(), "params": self.params.to_list(), "label": self.label}


@dataclass(frozen=True)
class Circuit:
    """
    Elements in application order: elements[0] acts on the input first.

    ``notes`` carries builder diagnostics (end values, solved pattern
    angles) and is not part of the netlist.
    """
    n: int
    elements: Tuple[OpticalElement, ...]
    input_ports: Tuple[str, ...] = ()
    output_ports: Tuple[str, ...] = ()
    notes: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def labels(self) -> List[str]:
        return [e.label for e in self.elements]

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "elements": [e.to_dict() for e in self.elements]}


def default_ports(n: int) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """Port labels "1_in".."n_in" and "1_out".."n_out"."""
    return (tuple(f"{k}_in" for k in range(1, n + 1)),
            tuple(f"{k}_out" for k in range(1, n + 1)))


def create_optical_element(pair: Sequence[int], params: Sequence[float], n: int,
                           label: str = "") -> OpticalElement:
    """
    Factory function to create a validated element.

    Raises:
        InvalidChainError: If the pair does not fit n channels or params has the wrong length
        InvalidParameterError: If a parameter is not finite
    """
    if len(pair) != 2 or len(params) != 3:
        raise InvalidChainError(
            f"Element {label!r} needs a two-entry pair and three parameters",
            details={'pair': list(pair), 'params': list(params)}
        )
    try:
        channel_pair = create_channel_pair(int(pair[0]), int(pair[1]), n)
    except ValidationError as e:
        raise InvalidChainError(e.message, details=e.details)
    return OpticalElement(channel_pair, create_beam_splitter_params(*params), label)


def create_circuit(n: int, elements: Sequence[OpticalElement],
                   notes: Dict[str, Any] = None) -> Circuit:
    """
    Factory function to create a circuit with default port labels.

    Raises:
        InvalidChainError: If n < 2 or an element does not fit n channels
    """
    if n < 2:
        raise InvalidChainError(f"A circuit needs at least two channels, got {n}", details={'n': n})
    for index, element in enumerate(elements):
        if element.pair.j > n:
            raise InvalidChainError(
                f"Element {index} ({element.label}) does not fit {n} channels",
                details={'index': index, 'n': n}
            )
    inputs, outputs = default_ports(n)
    return Circuit(n, tuple(elements), inputs, outputs, dict(notes or {}))
