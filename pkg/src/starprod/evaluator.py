"""Evaluation of parsed expressions against a session configuration."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from . import parser as ast
from .calculus import (
    ProjectorSplit,
    projector_split,
    star_eigencheck,
    star_exp_truncated,
)
from .errors import AlgebraError, DomainError, EvalError
from .mechanics import poisson_bracket
from .multivector import Metric, Multivector, NONSTANDARD, as_multivector
from .products import ProductKind, star, star_anticommutator, star_commutator
from .scalar import ScalarH
from .textform import multivector_to_json, multivector_to_obj, scalar_to_obj


@dataclass(frozen=True)
class SessionConfig:
    """Evaluation defaults; mirrors the CLI's global flags."""

    metric: Metric = NONSTANDARD
    product: str = "moyal4"
    order: int = 8
    fmt: str = "text"

    def kind(self, tag: str | None = None) -> ProductKind:
        mapping = {"C": "clifford", "M3": "moyal3", "M4": "moyal4", "MC": "moyal_clifford"}
        name = mapping[tag] if tag else self.product
        return ProductKind(name, self.metric)

    def with_metric(self, metric: Metric) -> "SessionConfig":
        return replace(self, metric=metric)


@dataclass(frozen=True)
class SplitResult:
    split: ProjectorSplit

    def to_text(self) -> str:
        return "\n".join(
            [
                f"eigenvalue: {self.split.eigenvalue}",
                f"pi_plus:  {self.split.pi_plus}",
                f"pi_minus: {self.split.pi_minus}",
            ]
        )

    def to_json_obj(self) -> dict:
        return {
            "eigenvalue": scalar_to_obj(self.split.eigenvalue),
            "pi_plus": multivector_to_obj(self.split.pi_plus),
            "pi_minus": multivector_to_obj(self.split.pi_minus),
        }


@dataclass(frozen=True)
class BoolResult:
    value: bool

    def to_text(self) -> str:
        return "true" if self.value else "false"

    def to_json_obj(self) -> dict:
        return {"result": self.value}


EvalValue = Multivector | SplitResult | BoolResult


def evaluate(node: ast.Expr, cfg: SessionConfig) -> EvalValue:
    try:
        return _eval(node, cfg)
    except AlgebraError as exc:
        raise EvalError(str(exc)) from exc


def _eval_value(node: ast.Expr, cfg: SessionConfig) -> Multivector:
    value = _eval(node, cfg)
    if not isinstance(value, Multivector):
        raise EvalError("expected a multivector-valued sub-expression")
    return value


def _constant_rational(node: ast.Expr, cfg: SessionConfig, what: str) -> Fraction:
    value = _eval_value(node, cfg)
    try:
        return value.constant_scalar().rational_value()
    except AlgebraError as exc:
        raise EvalError(f"{what} must be a constant rational") from exc


def _eval(node: ast.Expr, cfg: SessionConfig) -> EvalValue:
    if isinstance(node, ast.Num):
        return Multivector.scalar(ScalarH.rational(node.value))
    if isinstance(node, ast.ImagUnit):
        return Multivector.scalar(ScalarH.i())
    if isinstance(node, ast.HbarSym):
        return Multivector.scalar(ScalarH.hbar())
    if isinstance(node, ast.Var):
        from .poly import PhasePoly

        return Multivector.scalar(PhasePoly.variable(node.name))
    if isinstance(node, ast.BladeLit):
        return Multivector.blade(node.indices)
    if isinstance(node, ast.Neg):
        return -_eval_value(node.inner, cfg)
    if isinstance(node, ast.Pow):
        base = _eval_value(node.base, cfg)
        out = Multivector.one()
        for _ in range(node.exponent):
            out = out * base
        return out
    if isinstance(node, ast.BinOp):
        left = _eval_value(node.left, cfg)
        right = _eval_value(node.right, cfg)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        tag = {"*C": "C", "*M3": "M3", "*M4": "M4", "*MC": "MC"}[node.op]
        return star(left, right, cfg.kind(tag))
    if isinstance(node, ast.Bracket):
        left = _eval_value(node.left, cfg)
        right = _eval_value(node.right, cfg)
        if node.form == "pb":
            if not (left.is_scalar() and right.is_scalar()):
                raise EvalError("pb() needs grade-0 arguments")
            return Multivector.scalar(poisson_bracket(left.scalar_part(), right.scalar_part()))
        kind = cfg.kind(node.kind)
        if node.form == "comm":
            return star_commutator(left, right, kind)
        return star_anticommutator(left, right, kind)
    if isinstance(node, ast.Call):
        return _eval_call(node, cfg)
    raise EvalError(f"cannot evaluate node {node!r}")


def _eval_call(node: ast.Call, cfg: SessionConfig) -> EvalValue:
    name, args = node.name, node.args
    if name == "grade":
        if len(args) != 2:
            raise EvalError("grade(a, n) takes two arguments")
        value = _eval_value(args[0], cfg)
        n = _constant_rational(args[1], cfg, "grade index")
        if n.denominator != 1 or not 0 <= n <= 4:
            raise EvalError("grade index must be an integer 0..4")
        return value.grade_project(int(n))
    if name == "exp":
        if len(args) not in (1, 2):
            raise EvalError("exp(k) or exp(k, order)")
        value = _eval_value(args[0], cfg)
        order = cfg.order
        if len(args) == 2:
            n = _constant_rational(args[1], cfg, "truncation order")
            if n.denominator != 1 or n < 0:
                raise EvalError("truncation order must be a non-negative integer")
            order = int(n)
        return star_exp_truncated(value, order, cfg.kind()).as_multivector()
    if name == "split":
        if len(args) != 1:
            raise EvalError("split(a) takes one argument")
        value = _eval_value(args[0], cfg)
        return SplitResult(projector_split(value, cfg.kind()))
    if name == "eigencheck":
        if len(args) != 3:
            raise EvalError("eigencheck(h, w, lambda) takes three arguments")
        h = _eval_value(args[0], cfg)
        w = _eval_value(args[1], cfg)
        lam = _eval_value(args[2], cfg)
        try:
            lam_scalar = lam.constant_scalar()
        except AlgebraError as exc:
            raise EvalError("eigenvalue must be a constant scalar") from exc
        return BoolResult(star_eigencheck(h, w, lam_scalar, cfg.kind()))
    raise EvalError(f"unknown function {name!r}")


def render(value: EvalValue, cfg: SessionConfig) -> str:
    if cfg.fmt == "json":
        import json

        if isinstance(value, Multivector):
            return multivector_to_json(value)
        return json.dumps(value.to_json_obj(), separators=(",", ":"), sort_keys=True)
    if isinstance(value, Multivector):
        return str(value)
    return value.to_text()


def eval_source(source: str, cfg: SessionConfig) -> EvalValue:
    return evaluate(ast.parse(source), cfg)
