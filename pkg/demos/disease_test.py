"""A positive medical test: how likely is the disease?

Loads the disease program, prints the prior, the probability of a positive
result, and the posterior after conditioning on it.
"""
from pathlib import Path

from comet import load_program
from comet.rationals import format_decimal, format_ratio

CORPUS = Path(__file__).resolve().parents[1] / "src" / "comet" / "corpus"

prog = load_program(CORPUS / "disease.comet")
print("prior on the subject:")
for row in prog.evaluate("subject").render():
    print("  ", row)

res = prog.infer("subject", "positive_result")
print(f"probability of a positive result: {format_ratio(res.validity)} = {format_decimal(res.validity)}")
print(f"smallest n with 1/n below it: {res.witness}")
print("posterior:")
for row in res.posterior.render():
    print("  ", row)
