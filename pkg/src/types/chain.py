"""
Factor chains: ordered products of SU(2) blocks embedded on channel pairs.
"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Sequence, Tuple

from src.types.unitary import ChannelPair, create_channel_pair
from src.utils.error_handler import InvalidChainError, ValidationError, validate_all_finite


FactorKind = Literal[
    "euler",          # (alpha, beta, gamma) of su2_from_euler
    "beamsplitter",   # (phi_t, theta, phi_r) of beam_splitter
    "real_rotation",  # (s, 0, 0): the real rotation by s
]

NullingOrder = Literal[
    "columns",  # null below-diagonal entries column by column, left multiplication
    "rows",     # null below-diagonal entries row by row, right multiplication
]

FACTOR_KINDS: Tuple[str, ...] = ("euler", "beamsplitter", "real_rotation")
NULLING_ORDERS: Tuple[str, ...] = ("columns", "rows")


@dataclass(frozen=True)
class SU2Factor:
    pair: ChannelPair
    kind: FactorKind
    params: Tuple[float, float, float]

    def to_dict(self) -> Dict:
        return {"pair": self.pair.to_list(), "kind": self.kind, "params": list(self.params)}


@dataclass(frozen=True)
class FactorChain:
    """
    Ordered factors; the leftmost factor is applied last, so the chain
    stands for factors[0] . factors[1] . ... . factors[-1].
    """
    n: int
    factors: Tuple[SU2Factor, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return [(f.pair.i, f.pair.j) for f in self.factors]

    def to_dict(self) -> Dict:
        return {"n": self.n, "factors": [f.to_dict() for f in self.factors]}


def create_su2_factor(pair: Sequence[int], kind: str, params: Sequence[float], n: int) -> SU2Factor:
    """
    Factory function to create a validated factor.

    Raises:
        InvalidChainError: If the pair does not fit n channels or the kind is unknown
        InvalidParameterError: If a parameter is not finite
    """
    if kind not in FACTOR_KINDS:
        raise InvalidChainError(f"Unknown factor kind {kind!r}", details={'kind': kind})
    if len(pair) != 2 or len(params) != 3:
        raise InvalidChainError(
            "A factor needs a two-entry pair and three parameters",
            details={'pair': list(pair), 'params': list(params)}
        )
    try:
        channel_pair = create_channel_pair(int(pair[0]), int(pair[1]), n)
    except ValidationError as e:
        raise InvalidChainError(e.message, details=e.details)
    validate_all_finite(list(params), ('p1', 'p2', 'p3'))
    return SU2Factor(channel_pair, kind, tuple(float(p) for p in params))


def create_factor_chain(n: int, factors: Sequence[SU2Factor] = ()) -> FactorChain:
    """
    Factory function to create a validated chain.

    Raises:
        InvalidChainError: If n < 1 or a factor was built for another channel count
    """
    if n < 1:
        raise InvalidChainError(f"Channel count must be positive, got {n}", details={'n': n})
    for index, factor in enumerate(factors):
        if factor.pair.n != n or factor.pair.j > n:
            raise InvalidChainError(
                f"Factor {index} on pair ({factor.pair.i},{factor.pair.j}) does not fit {n} channels",
                details={'index': index, 'n': n}
            )
    return FactorChain(n, tuple(factors))


def validate_nulling_order(order: str) -> NullingOrder:
    if order not in NULLING_ORDERS:
        raise ValidationError(f"Unknown nulling order {order!r}; expected one of {NULLING_ORDERS}",
                              field='order')
    return order


@dataclass(frozen=True)
class ElementCount:
    """Number of factors per channel pair and per kind; missing keys count 0."""
    by_pair: Counter
    by_kind: Counter
    total: int

    def to_dict(self) -> Dict:
        return {
            "by_pair": {f"{i},{j}": count for (i, j), count in sorted(self.by_pair.items())},
            "by_kind": dict(sorted(self.by_kind.items())),
            "total": self.total,
        }
