"""Print the two worked counterexamples.

The even-dimensional category shows a complex without weights 0 whose
avoiding decomposition cannot stay inside the category; the triple
example shows a nonzero object with a degenerate weight complex.
"""

from weightkit.counterexamples import worked_examples_report

print(worked_examples_report(), end="")
