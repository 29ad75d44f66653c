"""What the checker accepts and rejects.

Variables may be used at most once, partial sums need disjoint summands, and
normalisation needs a state with mass bounded away from zero.
"""
from comet import TypeCheckError, check_term, evaluate, load_program
from comet.syntax import Context

programs = {
    "duplicated variable": "def dup(x : 2) : 2 * 2 = x (x) x",
    "overlapping partial sum": "def over : 2 = 0.7 (+) 0.5",
    "disjoint partial sum": "def fine : 2 = 0.3 (+) 0.5",
    "normalising a failure": "def empty : 2 = norm (fail)",
}
for label, src in programs.items():
    try:
        prog = load_program(src)
    except TypeCheckError as e:
        print(f"{label}: rejected\n    {e}")
    else:
        (name,) = prog.definitions
        print(f"{label}: accepted, {name} = {prog.evaluate(name)!r}")

# the fair coin paired with itself: two independent draws
prog = load_program("def two : 2 (x) 2 = 1/2 (x) 1/2")
t = prog.definitions["two"].body
print("independent coins:", evaluate(Context(()), t, ty=check_term(Context(()), t).ty))
