"""The two normalization pipelines.

The first (hopf) removes the differential from the fiber generators: a
linear stage solves each length-one coefficient of D(w_k) as a base
boundary and absorbs it into a change of generators, then a higher stage
extracts preimages from the comultiplication coefficients, raising the
lowest word length of D(w_k) until it vanishes.  The second (ls) then
standardizes the comultiplication: even-length excess terms are removed by
DG homotopies whose coefficients are solved base boundaries; odd-length
excess splits along the cycle decomposition Z = E + N, the complement part
is forced into the shape sum b_I (S_I - w_I - w'_I) and absorbed by a
change of generators, and the exact part is removed by a homotopy.

Both pipelines emit certificates that the independent verifier replays, or
stop with an obstruction: a non-exact cycle reduced against the boundary
space, so equal classes always report equal witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    AlgebraError,
    Generator,
    Polynomial,
    monomial_key,
    normalize_monomial,
)
from .certify import (
    CertificateStep,
    ChangeOfGenerators,
    DGHomotopy,
    EquivalenceCertificate,
    conjugate,
    new_certificate,
    snapshot,
)
from .dga import EngineError
from .model import (
    Comultiplication,
    HypothesisReport,
    RelativeModel,
    check_homotopy_associative,
    check_hypotheses,
    validate_comultiplication,
    validate_relative_model,
)


class InvalidModelError(AlgebraError):
    """The input fails a structural precondition (not an obstruction)."""


@dataclass
class Obstruction:
    """A normalization step hit a nonzero class.

    The witness is a cycle with no preimage under the relevant
    differential, reduced against the boundary space.
    """

    stage: str  # hopf-linear | hopf-higher | ls-even | ls-odd
    generator: Generator
    word_length: int
    class_witness: Polynomial
    detail: str = ""


@dataclass
class NormalizationResult:
    outcome: str  # normalized | obstructed | hypothesis-violation
    report: HypothesisReport
    certificate: EquivalenceCertificate | None = None
    obstruction: Obstruction | None = None

    @property
    def normalized(self) -> bool:
        return self.outcome == "normalized"


def _processing_order(model: RelativeModel) -> list[Generator]:
    """The ordered fiber basis, stably re-sorted so degrees never decrease;
    this refines the given order exactly when needed by the inductions and
    is the identity on inputs already listed by degree."""
    return sorted(model.table.fiber, key=lambda gen: gen.degree)


def _require_valid(model: RelativeModel, comul: Comultiplication) -> None:
    verdict = validate_relative_model(model)
    if not verdict.ok:
        raise InvalidModelError("invalid relative model: " + verdict.failures[0])
    verdict = validate_comultiplication(model, comul)
    if not verdict.ok:
        raise InvalidModelError("invalid comultiplication: " + verdict.failures[0])


def _record_cog_step(
    steps: list[CertificateStep],
    phi: ChangeOfGenerators,
    model: RelativeModel,
    comul: Comultiplication,
    note: str,
    stage: str,
) -> None:
    d_after, c_after = snapshot(model, comul)
    steps.append(CertificateStep("change_of_generators", phi, None, d_after,
                                 c_after, note, stage))


def _record_homotopy_step(
    steps: list[CertificateStep],
    homotopy: DGHomotopy,
    model: RelativeModel,
    comul: Comultiplication,
    note: str,
    stage: str,
) -> None:
    d_after, c_after = snapshot(model, comul)
    steps.append(CertificateStep("homotopy", None, homotopy, d_after, c_after,
                                 note, stage))


# -- the Hopf pipeline -----------------------------------------------------------


def hopf_stage_linear(model, comul):
    """Remove the word-length-one part of every D(w_k).

    Each linear coefficient is an odd-degree cycle whenever the model is
    valid; solving it as a boundary feeds the change of generators
    w_k -> w_k - sum eta_i w_i.  Returns (model, comul, steps, obstruction).
    """
    steps: list[CertificateStep] = []
    base = model.base_cdga()
    for gen in _processing_order(model):
        linear = model.D(gen).word_length_parts().get(1)
        if not linear:
            continue
        tail = Polynomial.zero()
        for fiber_mono, coeff in sorted(
            linear.group_by_fiber_part().items(), key=lambda kv: monomial_key(kv[0])
        ):
            if base.d(coeff):
                raise EngineError(
                    f"linear coefficient of D({gen.display()}) is not a cycle; "
                    "the differential does not square to zero"
                )
            eta = base.solve_preimage(coeff)
            if eta is None:
                degree = coeff.homogeneous_degree()
                witness = base.cohomology_slice(degree).reduce(coeff)
                return model, comul, steps, Obstruction(
                    "hopf-linear", gen, 1, witness,
                    f"linear coefficient of D({gen.display()}) represents a "
                    f"nonzero class in degree {degree}",
                )
            tail = tail + eta * Polynomial({fiber_mono: Fraction(1)})
        phi = ChangeOfGenerators({gen.id: Polynomial.from_generator(gen) - tail})
        model, comul = conjugate(model, comul, phi)
        _record_cog_step(steps, phi, model, comul,
                         f"remove linear differential of {gen.display()}",
                         "hopf-linear")
    for gen in model.table.fiber:
        if 1 in model.D(gen).word_length_parts():
            raise EngineError("linear stage left a length-one differential term")
    return model, comul, steps, None


def _extract_eta(model, comul, gen, seq_gens):
    """The preimage candidate for the coefficient of w_I in D(w_k), read
    off the comultiplication coefficients: the coefficient of
    w'_{i1} w_{i2} ... w_{ir}, divided by the leading multiplicity when the
    leading index repeats."""
    table = model.table
    leading = seq_gens[0]
    repeats = sum(1 for g in seq_gens if g.id == leading.id)
    factors = []
    if repeats > 1:
        factors.append((table.copy(leading, 0), repeats - 1))
    factors.append((table.copy(leading, 1), 1))
    factors.extend((table.copy(g, 0), 1) for g in seq_gens[repeats:])
    mono, sign = normalize_monomial(factors)
    if sign == 0:
        return None
    coeff = comul.image(gen).group_by_fiber_part().get(mono)
    if coeff is None:
        return None
    return coeff.scale(Fraction(sign, repeats))


def hopf_stage_higher(model, comul):
    """Raise the lowest word length of each D(w_k) until it vanishes.

    Requires every D(w) to lie in word length two or more.  Preimages come
    from the comultiplication coefficients (with the 1/N division when the
    leading index repeats); a deterministic boundary solve is the fallback,
    and failure of both is an obstruction.
    """
    steps: list[CertificateStep] = []
    base = model.base_cdga()
    table = model.table
    for gen in model.table.fiber:
        parts = model.D(gen).word_length_parts()
        if parts and min(parts) < 2:
            raise InvalidModelError(
                f"D({gen.display()}) has word length below two; "
                "run the linear stage first"
            )
    for gen in _processing_order(model):
        guard = 0
        while model.D(gen):
            guard += 1
            if guard > model.truncation + 2:
                raise EngineError("word length failed to increase")
            parts = model.D(gen).word_length_parts()
            r = min(parts)
            lowest = parts[r]
            tail = Polynomial.zero()
            for fiber_mono, b in sorted(
                lowest.group_by_fiber_part().items(), key=lambda kv: monomial_key(kv[0])
            ):
                if base.d(b):
                    raise EngineError(
                        f"coefficient of D({gen.display()}) in word length {r} "
                        "is not a cycle"
                    )
                seq_gens = []
                for g, e in fiber_mono:
                    seq_gens.extend([table.copy(g, 0)] * e)
                eta = _extract_eta(model, comul, gen, seq_gens)
                if eta is None or base.d(eta) != b:
                    eta = base.solve_preimage(b)
                if eta is None:
                    degree = b.homogeneous_degree()
                    witness = base.cohomology_slice(degree).reduce(b)
                    return model, comul, steps, Obstruction(
                        "hopf-higher", gen, r, witness,
                        f"coefficient of D({gen.display()}) at word length {r} "
                        f"represents a nonzero class in degree {degree}",
                    )
                tail = tail + eta * Polynomial({fiber_mono: Fraction(1)})
            phi = ChangeOfGenerators({gen.id: Polynomial.from_generator(gen) - tail})
            new_model, new_comul = conjugate(model, comul, phi)
            new_parts = new_model.D(gen).word_length_parts()
            if new_parts and min(new_parts) <= r:
                raise EngineError(
                    f"lowest word length of D({gen.display()}) did not increase"
                )
            model, comul = new_model, new_comul
            _record_cog_step(
                steps, phi, model, comul,
                f"raise differential word length of {gen.display()} past {r}",
                "hopf-higher",
            )
    return model, comul, steps, None


def hopf_normalize(
    model: RelativeModel, comul: Comultiplication, force: bool = False
) -> NormalizationResult:
    """Full differential removal: hypotheses, linear stage, higher stage."""
    _require_valid(model, comul)
    report = check_hypotheses(model)
    if not report.satisfied and not force:
        return NormalizationResult("hypothesis-violation", report)
    cert = new_certificate(model, comul)
    model, comul, steps, obstruction = hopf_stage_linear(model, comul)
    cert.steps.extend(steps)
    if obstruction is None:
        model, comul, steps, obstruction = hopf_stage_higher(model, comul)
        cert.steps.extend(steps)
    if obstruction is not None:
        return NormalizationResult("obstructed", report, obstruction=obstruction)
    cert.target_d, cert.target_c = snapshot(model, comul)
    return NormalizationResult("normalized", report, certificate=cert)


# -- the Leray-Samelson pipeline ---------------------------------------------------


def _excess_parts(comul: Comultiplication, gen: Generator) -> dict[int, Polynomial]:
    return comul.excess(gen).word_length_parts()


def _even_homotopy(model, comul, gen, removed, eta_poly):
    """H(w_k) = C(w_k) - P t - eta dt, constant on the other generators."""
    table = model.table
    images: dict[int, Polynomial] = {}
    t = Polynomial.from_generator(table.t)
    dt = Polynomial.from_generator(table.dt)
    for other in table.fiber:
        images[other.id] = comul.image(other)
    images[gen.id] = comul.image(gen) - removed * t - eta_poly * dt
    psi0 = dict(comul.images)
    psi1 = dict(comul.images)
    psi1[gen.name] = comul.image(gen) - removed
    return DGHomotopy(images, psi0, psi1)


def ls_even_step(model, comul, gen, r):
    """Remove the even-length excess P_r of C(w_k) by one DG homotopy.

    Every coefficient of P_r is a cycle; each must be a boundary, and the
    solved preimages form the dt-coefficient of the homotopy.  Returns
    (comul, steps, obstruction).
    """
    part = _excess_parts(comul, gen).get(r)
    if not part:
        return comul, [], None
    base = model.base_cdga()
    eta_poly = Polynomial.zero()
    witness = Polynomial.zero()
    failed = False
    for fiber_mono, coeff in sorted(part.group_by_fiber_part().items(), key=lambda kv: monomial_key(kv[0])):
        if base.d(coeff):
            raise EngineError(
                f"excess coefficient of C({gen.display()}) is not a cycle"
            )
        eta = base.solve_preimage(coeff)
        mono_poly = Polynomial({fiber_mono: Fraction(1)})
        if eta is None:
            failed = True
            degree = coeff.homogeneous_degree()
            witness = witness + base.cohomology_slice(degree).reduce(coeff) * mono_poly
        else:
            eta_poly = eta_poly + eta * mono_poly
    if failed:
        return comul, [], Obstruction(
            "ls-even", gen, r, witness,
            f"word-length-{r} excess of C({gen.display()}) has non-exact "
            "coefficients",
        )
    homotopy = _even_homotopy(model, comul, gen, part, eta_poly)
    new_images = dict(comul.images)
    new_images[gen.name] = comul.image(gen) - part
    new_comul = Comultiplication(model.table, new_images)
    steps: list[CertificateStep] = []
    _record_homotopy_step(
        steps, homotopy, model, new_comul,
        f"remove even excess of length {r} from C({gen.display()})",
        "ls-even",
    )
    return new_comul, steps, None


def ls_odd_step(model, comul, gen, r):
    """Remove the odd-length excess P_r of C(w_k).

    The excess splits coefficientwise along Z = E + N.  The complement part
    must take the shape sum b_I (S_I - w_I - w'_I); the change of
    generators w_k -> w_k + sum b_I w_I absorbs it, and the remaining exact
    part is removed by a homotopy as in the even case.  Returns
    (comul, steps, obstruction).
    """
    from .propsolver import BasicFormError, solve_basic_form

    part = _excess_parts(comul, gen).get(r)
    if not part:
        return comul, [], None
    base = model.base_cdga()
    table = model.table
    exact_part = Polynomial.zero()
    complement_part = Polynomial.zero()
    for fiber_mono, coeff in part.group_by_fiber_part().items():
        if base.d(coeff):
            raise EngineError(
                f"excess coefficient of C({gen.display()}) is not a cycle"
            )
        slice_ = base.cohomology_slice(coeff.homogeneous_degree())
        exact, rest = slice_.decompose(coeff)
        mono_poly = Polynomial({fiber_mono: Fraction(1)})
        exact_part = exact_part + exact * mono_poly
        complement_part = complement_part + rest * mono_poly
    steps: list[CertificateStep] = []
    if complement_part:
        try:
            coefficients = solve_basic_form(table, complement_part)
        except BasicFormError as exc:
            return comul, [], Obstruction(
                "ls-odd", gen, r, complement_part,
                f"word-length-{r} excess of C({gen.display()}) is not of the "
                f"basic form ({exc.kind} failure)",
            )
        absorb = Polynomial.zero()
        for names, b in sorted(coefficients.items()):
            if base.d(b):
                raise EngineError("basic-form coefficient is not a cycle")
            w_I = Polynomial.one()
            for name in names:
                w_I = w_I * table.poly(name, copy=0)
            absorb = absorb + b * w_I
        phi = ChangeOfGenerators({gen.id: Polynomial.from_generator(gen) - absorb})
        model2, comul2 = conjugate(model, comul, phi)
        if snapshot(model2, comul2)[0] != snapshot(model, comul)[0]:
            raise EngineError("odd-step change of generators moved the differential")
        expected = comul.image(gen) - complement_part
        if comul2.image(gen) != expected:
            raise EngineError("odd-step change of generators did not absorb the "
                              "complement part")
        model, comul = model2, comul2
        _record_cog_step(
            steps, phi, model, comul,
            f"absorb complement part of length {r} into {gen.display()}",
            "ls-odd",
        )
    # remove the exact part by a homotopy
    if exact_part:
        eta_poly = Polynomial.zero()
        for fiber_mono, coeff in sorted(
            exact_part.group_by_fiber_part().items(), key=lambda kv: monomial_key(kv[0])
        ):
            eta = base.solve_preimage(coeff)
            if eta is None:
                raise EngineError("exact part of the odd excess failed to solve")
            eta_poly = eta_poly + eta * Polynomial({fiber_mono: Fraction(1)})
        homotopy = _even_homotopy(model, comul, gen, exact_part, eta_poly)
        new_images = dict(comul.images)
        new_images[gen.name] = comul.image(gen) - exact_part
        comul = Comultiplication(table, new_images)
        _record_homotopy_step(
            steps, homotopy, model, comul,
            f"remove exact part of length {r} from C({gen.display()})",
            "ls-odd",
        )
    return comul, steps, None


def ls_normalize(
    model: RelativeModel, comul: Comultiplication, force: bool = False
) -> NormalizationResult:
    """Full standardization of the comultiplication.

    Hypothesis check, homotopy-associativity check, differential removal,
    then per generator and ascending word length the even/odd steps until
    every image is standard.
    """
    _require_valid(model, comul)
    report = check_hypotheses(model)
    if not report.satisfied and not force:
        return NormalizationResult("hypothesis-violation", report)
    assoc = check_homotopy_associative(model, comul)
    if not assoc.ok:
        witnesses = ", ".join(
            f"{name}: {cls!r}" for name, cls in sorted(assoc.failures.items())
        )
        raise InvalidModelError(
            "comultiplication is not homotopy associative; non-exact defect "
            f"classes: {witnesses}"
        )
    cert = new_certificate(model, comul)
    model, comul, steps, obstruction = hopf_stage_linear(model, comul)
    cert.steps.extend(steps)
    if obstruction is None:
        model, comul, steps, obstruction = hopf_stage_higher(model, comul)
        cert.steps.extend(steps)
    if obstruction is not None:
        return NormalizationResult("obstructed", report, obstruction=obstruction)
    for gen in _processing_order(model):
        guard = 0
        while True:
            guard += 1
            if guard > model.truncation + 2:
                raise EngineError("excess word length failed to increase")
            parts = _excess_parts(comul, gen)
            if not parts:
                break
            r = min(parts)
            before = r
            if r % 2 == 0:
                comul, steps, obstruction = ls_even_step(model, comul, gen, r)
            else:
                comul, steps, obstruction = ls_odd_step(model, comul, gen, r)
            if obstruction is not None:
                return NormalizationResult("obstructed", report, obstruction=obstruction)
            cert.steps.extend(steps)
            parts = _excess_parts(comul, gen)
            if parts and min(parts) <= before:
                raise EngineError("excess word length did not increase")
    if not comul.is_standard():
        raise EngineError("pipeline finished with a non-standard comultiplication")
    cert.target_d, cert.target_c = snapshot(model, comul)
    return NormalizationResult("normalized", report, certificate=cert)
