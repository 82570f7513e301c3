"""
order.py — monomial orders as sort keys.

Every order is a block order: blocks are compared left to right, degrevlex
inside each block. lex is the special case of singleton blocks. Variables of a
context that no block names form a trailing degrevlex block in context order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Tuple

from .poly import Exp

__all__ = ["MonomialOrder", "DEGREVLEX"]


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "degrevlex"                       # degrevlex | lex | block
    blocks: Tuple[Tuple[str, ...], ...] = ()

    @classmethod
    def degrevlex(cls, vars: Sequence[str] = ()) -> "MonomialOrder":
        return cls("degrevlex", (tuple(vars),) if vars else ())

    @classmethod
    def lex(cls, vars: Sequence[str] = ()) -> "MonomialOrder":
        return cls("lex", tuple((v,) for v in vars))

    @classmethod
    def block(cls, *blocks: Sequence[str]) -> "MonomialOrder":
        return cls("block", tuple(tuple(b) for b in blocks if b))

    @classmethod
    def elimination(cls, drop: Sequence[str], keep: Sequence[str] = ()) -> "MonomialOrder":
        """drop-variables dominate everything else."""
        return cls.block(tuple(sorted(drop)), tuple(keep))

    @classmethod
    def named(cls, name: str) -> "MonomialOrder":
        if name == "lex":
            return cls("lex")
        if name == "degrevlex":
            return cls()
        raise ValueError(f"unknown monomial order {name!r}")

    def key(self, vars: Tuple[str, ...]) -> Callable[[Exp], tuple]:
        return _key_for(self, tuple(vars))

    def __str__(self) -> str:
        if self.kind == "block":
            return "block(" + " > ".join("[" + ",".join(b) + "]" for b in self.blocks) + ")"
        return self.kind


DEGREVLEX = MonomialOrder()


@lru_cache(maxsize=512)
def _key_for(order: MonomialOrder, vars: Tuple[str, ...]) -> Callable[[Exp], tuple]:
    named = [v for b in order.blocks for v in b if v in vars]
    rest = [v for v in vars if v not in set(named)]
    if order.kind == "lex":
        layout = [[vars.index(v)] for v in named] + [[vars.index(v)] for v in rest]
    else:
        layout = [[vars.index(v) for v in b if v in vars] for b in order.blocks]
        layout = [b for b in layout if b]
        if rest:
            layout.append([vars.index(v) for v in rest])
    layout_t = tuple(tuple(b) for b in layout)

    if len(layout_t) == 1 and order.kind != "lex":
        idx = layout_t[0]
        rev = tuple(reversed(idx))

        def key1(e: Exp) -> tuple:
            return (sum(e[i] for i in idx),) + tuple(-e[i] for i in rev)
        return key1

    def key(e: Exp) -> tuple:
        out = []
        for b in layout_t:
            out.append(sum(e[i] for i in b))
            out.extend(-e[i] for i in reversed(b))
        return tuple(out)
    return key
