"""Random well-typed terms against the equational laws.

Runs a small sample of every law, then replaces sequential conjunction
by a buggy version and shows the shrunk counterexample the suite reports.
"""
from comet import GenConfig, derived, run_law_suite

report = run_law_suite(GenConfig(seed=7, instances=20), ["ovee", "effect", "and"])
print(report.to_text())

original = derived.andthen
derived.andthen = lambda p, q: p  # forgets its second argument
try:
    broken = run_law_suite(GenConfig(seed=7, instances=20), ["and.commutative"])
finally:
    derived.andthen = original
print(broken.to_text())
