"""Randomized exact checks on parsed transformations.

``check_equivariance`` tests that evaluation commutes with pushing inputs
and outputs forward along a linear map.  ``homogeneity_report`` tests the
scaling behaviour of each output and the split of a degree-d output into a
part in lower-degree inputs plus a part linear in degree-d inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .dsl import BindingError, Transformation, format_expr, monomial_types
from .tensors import DenseTensor, apply_linear, derived_rng, random_matrix, random_rational, random_tensor

Evaluator = Callable[[Transformation, Mapping, int], list]


def default_evaluator(t: Transformation, bindings: Mapping, n: int) -> list[DenseTensor]:
    return t.evaluate(bindings, n)


def sample_params(t: Transformation, rng: random.Random, attempts: int = 200) -> dict:
    """Random parameter values, rejection-sampled against the constraints."""
    for _ in range(attempts):
        vals = {p: random_rational(rng) for p in t.params}
        try:
            t.check_constraints(vals)
        except BindingError:
            continue
        return vals
    raise ValueError("could not sample parameters satisfying the constraints; pass params explicitly")


def sample_inputs(t: Transformation, rng: random.Random, n: int) -> dict:
    return {name: random_tensor(rng, d, n) for name, d in t.inputs}


@dataclass
class EquivarianceReport:
    name: str
    n: int
    m: int
    trials: int
    seed: int
    passed: int = 0
    failed: int = 0
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {
            "transformation": self.name,
            "n": self.n,
            "m": self.m,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "failed": self.failed,
            "verdict": "pass" if self.ok else "fail",
            "counterexample": self.counterexample,
        }


def check_equivariance(
    t: Transformation,
    n: int,
    m: int,
    trials: int = 50,
    seed: int = 0,
    params: Mapping | None = None,
    evaluator: Evaluator = default_evaluator,
) -> EquivarianceReport:
    """Check on random trials that pushing outputs forward equals evaluating on pushed inputs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    report = EquivarianceReport(t.name, n, m, trials, seed)
    for trial in range(trials):
        rng = derived_rng(seed, "equivariance", trial)
        linmap = random_matrix(rng, m, n)
        scalars = dict(params) if params is not None else sample_params(t, rng)
        inputs = sample_inputs(t, rng, n)
        lhs = [apply_linear(linmap, out) for out in evaluator(t, {**scalars, **inputs}, n)]
        pushed = {name: apply_linear(linmap, x) for name, x in inputs.items()}
        rhs = evaluator(t, {**scalars, **pushed}, m)
        bad = next((j for j, (a, b) in enumerate(zip(lhs, rhs)) if a != b), None)
        if bad is None and len(lhs) == len(rhs):
            report.passed += 1
            continue
        report.failed += 1
        if report.counterexample is None:
            report.counterexample = {
                "trial": trial,
                "output": bad,
                "map": [[str(x) for x in row] for row in linmap],
                "params": {k: str(v) for k, v in scalars.items()},
                "inputs": {k: v.to_json() for k, v in inputs.items()},
            }
    return report


@dataclass
class OutputHomogeneity:
    index: int
    expression: str
    degree: int
    # input degree class -> formal polynomial degrees of that class across monomials
    class_degrees: dict[int, list[int]]
    map_degree: int | str
    divisibility_ok: bool
    scaling_ok: dict[int, bool]
    linear_in_same_degree: bool | None = None
    independent_of_higher: bool | None = None

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "expression": self.expression,
            "degree": self.degree,
            "class_degrees": {str(k): v for k, v in self.class_degrees.items()},
            "map_degree": self.map_degree,
            "divisibility_ok": self.divisibility_ok,
            "scaling_ok": {str(k): v for k, v in self.scaling_ok.items()},
            "linear_in_same_degree": self.linear_in_same_degree,
            "independent_of_higher": self.independent_of_higher,
        }


@dataclass
class HomogeneityReport:
    signature: object
    outputs: list[OutputHomogeneity] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(
            o.divisibility_ok
            and all(o.scaling_ok.values())
            and o.linear_in_same_degree is not False
            and o.independent_of_higher is not False
            for o in self.outputs
        )

    def to_json(self) -> dict:
        return {"signature": self.signature.to_json(), "outputs": [o.to_json() for o in self.outputs], "ok": self.ok}


SCALARS = (Fraction(2), Fraction(-1), Fraction(1, 3))


def homogeneity_report(
    t: Transformation, n: int = 2, trials: int = 5, seed: int = 0, params: Mapping | None = None
) -> HomogeneityReport:
    """Structural and sampled homogeneity data for each output.

    For each input degree class e, an output in which every monomial uses
    exactly k inputs of class e must scale by s^k when those inputs are scaled
    by s.  Outputs over a single class must have degree k*e.  A degree-d
    output must be affine-linear in the degree-d inputs and must not depend
    on inputs of degree above d.
    """
    report = HomogeneityReport(t.signature)
    classes = sorted({d for _, d in t.inputs})
    for j, expr in enumerate(t.outputs):
        d = expr.degree
        types = monomial_types(expr)
        class_degrees = {e: sorted({dict(mt).get(e, 0) for mt in types}) for e in classes}
        md = t.signature.homogeneity[j]
        used = {e for mt in types for e, _ in mt}
        if isinstance(md, int) and len(used) == 1:
            (e,) = used
            div_ok = d % e == 0 and d // e == md
        else:
            div_ok = True
        out = OutputHomogeneity(j, format_expr(expr), d, class_degrees, md, div_ok, {})
        for e in classes:
            degs = class_degrees[e]
            if len(degs) != 1:
                continue
            k = degs[0]
            ok = True
            for trial in range(trials):
                rng = derived_rng(seed, "homog", j, e, trial)
                scal = dict(params) if params is not None else sample_params(t, rng)
                base = sample_inputs(t, rng, n)
                val = t.evaluate({**scal, **base}, n)[j]
                for s in SCALARS:
                    scaled = {name: (x.scale(s) if x.degree == e else x) for name, x in base.items()}
                    if t.evaluate({**scal, **scaled}, n)[j] != val.scale(s ** k):
                        ok = False
            out.scaling_ok[e] = ok
        if any(de == d for _, de in t.inputs):
            out.linear_in_same_degree = _split_linear(t, j, n, trials, seed, params)
        if any(de > d for _, de in t.inputs):
            out.independent_of_higher = _split_independent(t, j, n, trials, seed, params)
        report.outputs.append(out)
    return report


def _split_linear(t, j, n, trials, seed, params) -> bool:
    """q_d -> out(q_d) - out(q_d = 0) is additive and homogeneous of degree 1."""
    d = t.outputs[j].degree
    for trial in range(trials):
        rng = derived_rng(seed, "split-linear", j, trial)
        scal = dict(params) if params is not None else sample_params(t, rng)
        base = sample_inputs(t, rng, n)
        q1 = sample_inputs(t, rng, n)
        q2 = sample_inputs(t, rng, n)

        def at(q):
            b = dict(base)
            for name, de in t.inputs:
                if de == d:
                    b[name] = q[name]
            return t.evaluate({**scal, **b}, n)[j]

        zero = {name: DenseTensor.zeros(de, n) for name, de in t.inputs}
        f0 = at(zero)

        def g(q):
            return at(q) - f0

        qsum = {name: q1[name] + q2[name] for name in q1}
        if g(qsum) != g(q1) + g(q2):
            return False
        for s in SCALARS:
            if g({name: x.scale(s) for name, x in q1.items()}) != g(q1).scale(s):
                return False
    return True


def _split_independent(t, j, n, trials, seed, params) -> bool:
    d = t.outputs[j].degree
    for trial in range(trials):
        rng = derived_rng(seed, "split-indep", j, trial)
        scal = dict(params) if params is not None else sample_params(t, rng)
        base = sample_inputs(t, rng, n)
        other = sample_inputs(t, rng, n)
        perturbed = {name: (other[name] if de > d else base[name]) for name, de in t.inputs}
        if t.evaluate({**scal, **base}, n)[j] != t.evaluate({**scal, **perturbed}, n)[j]:
            return False
    return True
