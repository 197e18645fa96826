"""Derivation trees for every judgment of the calculus."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True, eq=False)
class Derivation:
    rule: str
    judgment: Any
    premises: tuple = ()

    def walk(self):
        """Pre-order traversal; shared sub-derivations are visited once per occurrence."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))

    def size(self):
        return sum(1 for _ in self.walk())


@dataclass(frozen=True, eq=False)
class ScopeJ:
    """``Γ ⊢`` when ``ty`` is None, else ``Γ ⊢ ty``."""

    ctx: tuple
    ty: Optional[Any] = None


@dataclass(frozen=True, eq=False)
class SubstJ:
    """``Γ, y:ρ, Δ ⊢ σ →[y\\Ψ] Γ, Δ' ⊢ τ``; ``ty``/``out_ty`` are None for the context form."""

    ctx: tuple
    var: str
    psi: tuple
    ty: Optional[Any]
    out_ctx: tuple
    out_ty: Optional[Any]


@dataclass(frozen=True, eq=False)
class TypingJ:
    actx: tuple
    term: Any
    ty: Any


@dataclass(frozen=True, eq=False)
class ValueTypingJ:
    ctx: tuple
    value: Any
    ty: Any


@dataclass(frozen=True, eq=False)
class ValueSubstJ:
    value: Any
    var: str
    arg: Any
    result: Any


@dataclass(frozen=True, eq=False)
class ReductionJ:
    env: tuple
    term: Any
    value: Any
    classic: bool = False
