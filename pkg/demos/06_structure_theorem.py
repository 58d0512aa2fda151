"""The four comparison maps and the shape of their coupled kernel.

For mixed elements of word length r >= 3 the solutions of
alpha(chi) + beta(chi) = gamma(chi) + delta(chi) are exactly the spans of
S_I - w_I - w'_I over strictly increasing I; at r = 2 the kernel is
strictly larger.  Both facts are checked here by brute-force elimination.
"""

import itertools

from fibrewise import (
    GeneratorTable,
    apply_map,
    basic_form_element,
    brute_force_solution_space,
    solve_basic_form,
)
from fibrewise.propsolver import _same_polynomial_span, polynomial_span_contains

table = GeneratorTable(base=[], fiber=[(f"w{i}", 3) for i in range(1, 6)])
gens = [table.generator("w0", f"w{i}") for i in range(1, 6)]

chi = table.poly("w1") * table.poly("w2", copy=1)
print("the four maps on w1 w2':")
for name in ("alpha", "beta", "gamma", "delta"):
    print(f"  {name}: {apply_map(table, name, chi)!r}")

print("\nbrute-force solution spaces (mixed, scalar coefficients):")
for r in (2, 3, 4):
    for pool_size in range(max(r, 2), 6):
        pool = gens[:pool_size]
        space = brute_force_solution_space(table, r, pool)
        expected = [basic_form_element(table, list(c))
                    for c in itertools.combinations(pool, r)]
        matches = _same_polynomial_span(space, expected)
        print(f"  r={r}, pool of {pool_size}: dim {len(space)}, "
              f"equals basic-form span: {matches}")

print("\nat r=2 the kernel strictly exceeds the basic-form span:")
space2 = brute_force_solution_space(table, 2, gens[:2])
print("  dim:", len(space2), " contains w1 w2':",
      polynomial_span_contains(space2, chi))

print("\nsolving a basic-form element back to its coefficients:")
target = 3 * basic_form_element(table, gens[:3])
print("  chi =", repr(target))
print("  coefficients:", {k: repr(v) for k, v in solve_basic_form(table, target).items()})
