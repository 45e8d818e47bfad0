"""Log-derivatives of potentials and the induced rational equation systems.

For a potential built from dilogarithms, log products and constants, the
scaled derivative mu_k = w_k dW/dw_k is a finite integer combination of
log(1 - m) and log(m) atoms over Laurent monomials m:

    w_k d/dw_k  s*Li2(m)          = -s * deg_k(m) * log(1 - m)
    w_k d/dw_k  s*log(m1)*log(m2) =  s * deg_k(m1) * log(m2)
                                   + s * deg_k(m2) * log(m1)

Because every coefficient is an integer, exp(mu_k) is a rational function
of the assignment: a product of (1-m)^c and m^c factors.  The equation
system exp(mu_k) = 1 is therefore solved in branch-free rational form,
with one variable pinned to 1 (overall scaling) and one equation dropped
(the exact relation sum_k mu_k = 0).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .diagram import Label
from .potential import Assignment, EvaluationError, Monomial, Potential
from .numerics import plog


@dataclass(frozen=True)
class LogAtom:
    """One contribution coeff * log(1-m) or coeff * log(m) to some mu_k."""

    coeff: int
    kind: Literal["log1m", "log"]
    m: Monomial


@dataclass(frozen=True)
class LogDerivative:
    variable: Label
    atoms: tuple[LogAtom, ...]

    def evaluate(self, a: Assignment) -> complex:
        """Principal-branch value of mu_k at the assignment."""
        total = 0.0 + 0.0j
        for atom in self.atoms:
            v = atom.m.value(a)
            arg = 1.0 - v if atom.kind == "log1m" else v
            if arg == 0:
                raise EvaluationError(f"degenerate monomial value {v} in mu_{self.variable!r}")
            total += atom.coeff * plog(arg)
        return total


def log_derivative(potential: Potential, var: Label) -> LogDerivative:
    if var not in potential.variables:
        raise KeyError(f"unknown variable {var!r}")
    acc: dict[tuple[str, Monomial], int] = {}

    def add(kind: str, m: Monomial, coeff: int):
        key = (kind, m)
        acc[key] = acc.get(key, 0) + coeff
        if acc[key] == 0:
            del acc[key]

    for t in potential.terms:
        if t.kind == "dilog":
            e = t.m1.exponent(var)
            if e:
                add("log1m", t.m1, -t.sign * e)
        elif t.kind == "logprod":
            e1 = t.m1.exponent(var)
            e2 = t.m2.exponent(var)
            if e1:
                add("log", t.m2, t.sign * e1)
            if e2:
                add("log", t.m1, t.sign * e2)
    atoms = tuple(LogAtom(c, kind, m) for (kind, m), c in acc.items())
    return LogDerivative(var, atoms)


def all_log_derivatives(potential: Potential) -> dict[Label, LogDerivative]:
    return {v: log_derivative(potential, v) for v in potential.variables}


def euler_coefficient_sums(potential: Potential) -> dict[tuple[str, Monomial], int]:
    """Net coefficient of each log atom in sum_k mu_k; all zero for any
    degree-0 potential (the exact Euler relation)."""
    acc: dict[tuple[str, Monomial], int] = {}
    for var in potential.variables:
        for atom in log_derivative(potential, var).atoms:
            key = (atom.kind, atom.m)
            acc[key] = acc.get(key, 0) + atom.coeff
            if acc[key] == 0:
                del acc[key]
    return acc


@dataclass(frozen=True)
class EquationSystem:
    """Pinned rational system exp(mu_k) - 1 = 0 for k over the active variables."""

    potential: Potential
    pin: Label
    unknowns: tuple[Label, ...]          # all variables except pin
    active: tuple[Label, ...]            # equations kept (pin's dropped)
    derivatives: dict[Label, LogDerivative]

    # compiled arrays; one row per (equation, factor)
    _eq_starts: np.ndarray               # (neq,) reduceat boundaries into factor arrays
    _fac_exps: np.ndarray                # (nfac, nvars) integer exponents
    _fac_coeff: np.ndarray               # (nfac,) monomial sign
    _fac_power: np.ndarray               # (nfac,) integer outer exponent
    _fac_is_1m: np.ndarray               # (nfac,) bool: factor (1-m) vs m
    _var_order: tuple[Label, ...]        # pin last

    @property
    def size(self) -> int:
        return len(self.unknowns)

    def assignment_from_vector(self, x: Sequence[complex]) -> dict[Label, complex]:
        a = {v: complex(val) for v, val in zip(self.unknowns, x)}
        a[self.pin] = 1.0 + 0.0j
        return a

    def vector_from_assignment(self, a: Assignment) -> np.ndarray:
        return np.array([complex(a[v]) for v in self.unknowns], dtype=complex)

    def _full_vector(self, x) -> np.ndarray:
        w_full = np.empty(len(self.unknowns) + 1, dtype=complex)
        w_full[:-1] = x
        w_full[-1] = 1.0
        return w_full

    def _factor_bases(self, w_full: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if np.any(w_full == 0.0):
            raise EvaluationError("zero variable value")
        # Any log branch works here: the integer exponents kill 2 pi i shifts.
        mv = self._fac_coeff * np.exp(self._fac_exps @ np.log(w_full))
        base = np.where(self._fac_is_1m, 1.0 - mv, mv)
        if np.any(base == 0.0):
            raise EvaluationError("non-essential point: monomial value in {0, 1}")
        return mv, base

    def _products(self, base: np.ndarray) -> np.ndarray:
        """exp(mu_k) per active equation from the factor bases."""
        logs = self._fac_power * np.log(base)
        if len(self._eq_starts) == 0:
            return np.empty(0, dtype=complex)
        return np.exp(np.add.reduceat(logs, self._eq_starts))

    def residual_vector(self, x: Sequence[complex]) -> np.ndarray:
        """exp(mu_k) - 1 per active equation with the pin held at 1."""
        _, base = self._factor_bases(self._full_vector(np.asarray(x, dtype=complex)))
        return self._products(base) - 1.0

    def jacobian(self, x: Sequence[complex]) -> np.ndarray:
        """Analytic Jacobian of the residual vector with respect to the unknowns."""
        w_full = self._full_vector(np.asarray(x, dtype=complex))
        mv, base = self._factor_bases(w_full)
        nu = len(self.unknowns)
        if len(self._eq_starts) == 0:
            return np.empty((0, nu), dtype=complex)
        F = self._products(base)
        # d log(base_f)/d w_v = power_f * exps[f, v] * g_f / w_v with
        # g = -m/(1-m) for (1-m) factors and 1 for plain monomial factors.
        coef = self._fac_power * np.where(self._fac_is_1m, -mv / base, 1.0)
        contrib = coef[:, None] * self._fac_exps[:, :nu]
        dlog = np.add.reduceat(contrib, self._eq_starts, axis=0) / w_full[:nu]
        return F[:, None] * dlog

    def residual(self, a: Assignment) -> np.ndarray:
        """Residual vector at a full assignment, pin included as given."""
        w_full = np.array([complex(a[v]) for v in self._var_order], dtype=complex)
        _, base = self._factor_bases(w_full)
        return self._products(base) - 1.0

    def mu(self, a: Assignment, var: Label) -> complex:
        return self.derivatives[var].evaluate(a)

    def mu_all(self, a: Assignment) -> dict[Label, complex]:
        return {v: d.evaluate(a) for v, d in self.derivatives.items()}


def build_system(potential: Potential, pin: Label | None = None) -> EquationSystem:
    """Pin one variable to 1 and drop its (redundant) equation."""
    variables = potential.variables
    if not variables:
        raise ValueError("potential has no variables")
    if pin is None:
        pin = variables[-1]
    if pin not in variables:
        raise KeyError(f"pin variable {pin!r} not in potential")
    unknowns = tuple(v for v in variables if v != pin)
    active = unknowns
    derivs = all_log_derivatives(potential)

    var_order = unknowns + (pin,)
    var_index = {v: i for i, v in enumerate(var_order)}
    eq_starts = []
    exps_rows: list[list[int]] = []
    coeffs: list[int] = []
    powers: list[int] = []
    is_1m: list[bool] = []
    for var in active:
        if not derivs[var].atoms:
            raise ValueError(f"variable {var!r} has an empty equation")
        eq_starts.append(len(exps_rows))
        for atom in derivs[var].atoms:
            row = [0] * len(var_order)
            for v, e in atom.m.exps:
                row[var_index[v]] = e
            exps_rows.append(row)
            coeffs.append(atom.m.coeff)
            powers.append(atom.coeff)
            is_1m.append(atom.kind == "log1m")

    return EquationSystem(
        potential=potential,
        pin=pin,
        unknowns=unknowns,
        active=active,
        derivatives=derivs,
        _eq_starts=np.array(eq_starts, dtype=np.intp),
        _fac_exps=np.array(exps_rows, dtype=float).reshape(len(exps_rows), len(var_order)),
        _fac_coeff=np.array(coeffs, dtype=complex),
        _fac_power=np.array(powers, dtype=float),
        _fac_is_1m=np.array(is_1m, dtype=bool),
        _var_order=var_order,
    )


def mu_integer_multipliers(system: EquationSystem, a: Assignment,
                           tol: float = 1e-6) -> dict[Label, int]:
    """Round each mu_k/(2 pi i) to an integer; error when not a solution."""
    out = {}
    for var in system.potential.variables:
        mu = system.derivatives[var].evaluate(a)
        k = round(mu.imag / (2.0 * cmath.pi))
        err = abs(mu - 2j * cmath.pi * k)
        if err > tol:
            raise EvaluationError(
                f"mu_{var!r} = {mu} is {err:.2e} away from 2 pi i Z; not a solution")
        out[var] = k
    return out
