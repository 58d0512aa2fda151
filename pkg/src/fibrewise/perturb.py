"""Seeded perturbation of an already-standard model.

Starting from D(W) = 0 and the standard comultiplication, a perturbation
conjugates by a pseudo-random unipotent change of generators and/or adds
exact coefficients (images of the differential) to the comultiplication.
The result is a valid model that is equivalent to the standard one by
construction, so the normalization pipelines must recover it exactly; this
is the oracle behind the round-trip tests.  The same seed on the same
model always produces the same output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraError, Polynomial, monomial_key
from .certify import ChangeOfGenerators, conjugate
from .model import (
    Comultiplication,
    RelativeModel,
    check_hypotheses,
    validate_comultiplication,
    validate_relative_model,
)

MODES = ("change-of-generators", "exact-homotopy", "both")


class PerturbationError(AlgebraError):
    """The requested perturbation is unsatisfiable for this model."""


@dataclass(frozen=True)
class PerturbationSpec:
    seed: int
    max_word_length: int = 3
    mode: str = "both"

    def __post_init__(self):
        if self.mode not in MODES:
            raise PerturbationError(f"unknown perturbation mode {self.mode!r}")
        if self.max_word_length < 1:
            raise PerturbationError("max_word_length must be at least 1")


_COEFFICIENTS = (
    Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
    Fraction(1, 2), Fraction(3),
)


def _change_of_generators(model, rng, max_word_length):
    table = model.table
    images = {}
    for position, gen in enumerate(table.fiber):
        allowed = model.fiber_prefix_gens(position)
        candidates = [
            mono
            for mono in table.monomial_basis(gen.degree, allowed, {"w0": 1})
            if sum(e for g, e in mono if g.space == "w0") <= max_word_length
        ]
        candidates.sort(key=monomial_key)
        if not candidates:
            continue
        count = rng.randint(1, min(2, len(candidates)))
        tail = Polynomial.zero()
        for mono in rng.sample(candidates, count):
            tail = tail + Polynomial({mono: rng.choice(_COEFFICIENTS)})
        if tail:
            images[gen.id] = Polynomial.from_generator(gen) + tail
    return ChangeOfGenerators(images) if images else None


def _exact_additions(model, rng, max_word_length):
    """Per generator, D(eta) for a random mixed eta of one lower degree;
    terms with vanishing differential contribute nothing and are skipped."""
    table = model.table
    square = model.tensor_cdga(2)
    additions = {}
    for gen in table.fiber:
        gens = table.spaces_gens(("base", "w0", "w1"))
        candidates = []
        for mono in table.monomial_basis(gen.degree - 1, gens, {"w0": 1, "w1": 1}):
            length = sum(e for g, e in mono if g.space in ("w0", "w1"))
            if length > max_word_length:
                continue
            image = square.d(Polynomial({mono: Fraction(1)}))
            if image:
                candidates.append((mono, image))
        if not candidates:
            continue
        count = rng.randint(1, min(2, len(candidates)))
        total = Polynomial.zero()
        for mono, image in rng.sample(candidates, count):
            total = total + image.scale(rng.choice(_COEFFICIENTS))
        if total:
            additions[gen.name] = total
    return additions


def perturb(
    model: RelativeModel, comul: Comultiplication, spec: PerturbationSpec
) -> tuple[RelativeModel, Comultiplication]:
    if any(model.D(gen) for gen in model.table.fiber):
        raise PerturbationError("perturbation requires a vanishing fiber differential")
    if not comul.is_standard():
        raise PerturbationError("perturbation requires the standard comultiplication")
    if not check_hypotheses(model).satisfied:
        raise PerturbationError("perturbation requires the normalization hypotheses")
    rng = random.Random(spec.seed)
    # exact additions first, on the pristine model (where D vanishes they
    # always preserve the DG condition); conjugation preserves validity of
    # whatever it is given, so it goes second
    if spec.mode in ("exact-homotopy", "both"):
        additions = _exact_additions(model, rng, spec.max_word_length)
        if additions:
            images = dict(comul.images)
            for name, extra in additions.items():
                images[name] = images[name] + extra
            comul = Comultiplication(model.table, images)
        elif spec.mode == "exact-homotopy" and model.table.fiber:
            raise PerturbationError(
                "no exact comultiplication perturbations are available at this "
                "truncation (no solvable differential images)"
            )
    if spec.mode in ("change-of-generators", "both"):
        phi = _change_of_generators(model, rng, spec.max_word_length)
        if phi is not None:
            model, comul = conjugate(model, comul, phi)
    for verdict in (
        validate_relative_model(model),
        validate_comultiplication(model, comul),
    ):
        if not verdict.ok:
            raise PerturbationError("perturbation produced an invalid model: "
                                    + verdict.failures[0])
    return model, comul
