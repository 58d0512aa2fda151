"""The free loop space of the 2-sphere as a fibrewise H-space model.

Base Lambda(x2, y3; dy = x^2), fiber generators xb (degree 1) and yb
(degree 2), D(yb) = -2 x xb, and the loop-composition comultiplication
C(yb) = yb + yb' + xb xb'.  The even fiber generator violates the
normalization hypotheses, and indeed the forced run finds that the linear
coefficient -2x of D(yb) represents the nonzero class [x] in H^2.
The comultiplication is nevertheless strictly coassociative.
"""

from fibrewise import (
    Comultiplication,
    GeneratorTable,
    RelativeModel,
    associativity_defect,
    check_hypotheses,
    hopf_normalize,
    validate_comultiplication,
)

table = GeneratorTable(base=[("x", 2), ("y", 3)], fiber=[("xb", 1), ("yb", 2)])
x = table.poly("x")
model = RelativeModel(
    table,
    d_base={"y": x * x},
    d_fiber={"yb": -2 * x * table.poly("xb")},
)
images = dict(Comultiplication.standard(table).images)
images["yb"] = (
    table.poly("yb") + table.poly("yb", copy=1)
    + table.poly("xb") * table.poly("xb", copy=1)
)
comul = Comultiplication(table, images)

print("comultiplication valid:", validate_comultiplication(model, comul).ok)
print("C(yb) =", repr(comul.images["yb"]))

for gen in table.fiber:
    defect = associativity_defect(model, comul, gen)
    print(f"associativity defect of {gen.display()}: {defect!r}")

report = check_hypotheses(model)
print("\nhypothesis violations:")
for line in report.describe():
    print("  -", line)

forced = hopf_normalize(model, comul, force=True)
print("\nforced normalization:", forced.outcome)
print("obstruction class:", repr(forced.obstruction.class_witness),
      f"(in degree {forced.obstruction.class_witness.homogeneous_degree()})")
