"""The alarm network: John calls, so was there a burglary?

The prior over (burglary, earthquake) is a product state.  Conditioning on
the composite predicate "the alarm rang and John called" and keeping the
first component gives the posterior on burglary.
"""
from pathlib import Path

from comet import load_program
from comet.rationals import format_decimal, format_ratio

CORPUS = Path(__file__).resolve().parents[1] / "src" / "comet" / "corpus"

prog = load_program(CORPUS / "burglary.comet")
res = prog.infer("b (x) e", "j . a", side=1)
print(f"probability that John calls: {format_ratio(res.validity)} = {format_decimal(res.validity)}")
print("unnormalised weights per (burglary, earthquake):")
for row in res.weights.render():
    print("  ", row)
print("posterior on burglary:")
for row in res.marginal.render():
    print("  ", row)

# the same question asked with an inline predicate
inline = prog.infer("b (x) e", r"\w -> let x (x) y = w in j(a(x, y))", side=1)
assert inline.marginal == res.marginal
print("inline predicate agrees:", inline.marginal == res.marginal)
