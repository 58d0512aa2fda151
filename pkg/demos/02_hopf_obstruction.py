"""A model that cannot be differential-trivialized, and why.

Base Lambda(b3) with zero differential, fiber (w3, w5), D(w5) = b3 w3.
The base has H^3 != 0, so the hypothesis scan refuses; forcing the run
shows the concrete blocker: the linear coefficient b3 of D(w5) is a cycle
that is not a boundary, so no change of generators can remove it.
"""

from fibrewise import (
    Comultiplication,
    GeneratorTable,
    RelativeModel,
    check_hypotheses,
    emit_triviality_report,
    hopf_normalize,
)

table = GeneratorTable(base=[("b3", 3)], fiber=[("w3", 3), ("w5", 5)])
model = RelativeModel(table, d_fiber={"w5": table.poly("b3") * table.poly("w3")})
comul = Comultiplication.standard(table)

report = check_hypotheses(model)
print("hypothesis report:")
for line in report.describe():
    print("  -", line)

print("\ndefault run (refuses on the violation):")
result = hopf_normalize(model, comul)
print(" ", result.outcome)

print("\nforced run (reports the first concrete obstruction):")
forced = hopf_normalize(model, comul, force=True)
print(" ", forced.outcome)
ob = forced.obstruction
print(f"  stage {ob.stage}, generator {ob.generator.display()}, "
      f"word length {ob.word_length}")
print(f"  obstruction class: {ob.class_witness!r}")

print("\n" + emit_triviality_report(forced, "hopf"))
