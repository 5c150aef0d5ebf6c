"""A domain touching every variable type and built-in, for soundness fuzzing."""
from __future__ import annotations

from absplan import parse_problem

FUZZ_DOMAIN = """\
(domain mixed
  (constants (k int 3) (rate real 2.5) (home (finite u v w) v))
  (variables
    (b bool) (n int) (x real) (f (finite u v w))
    (s (set-of u v w)) (t (set-of u v w)))
  (action bump (pre (< n 10) b) (eff (assign n (+ n k)) (assign b false)))
  (action burn (pre (>= x 0)) (eff (assign x (- x (* rate (cardinality s))))))
  (action move (pre (member f s)) (eff (assign s (remove-elem s f)) (assign t (add-elem t f))))
  (action square (pre (subset s t) (!= f w)) (eff (assign f w) (assign n (* n n))))
  (action grow (pre (= s t)) (eff (assign s (add-elem s u)) (assign x (+ x n))))
  (action flip (pre (> (cardinality t) 1)) (eff (assign b true) (assign n (- 0 n)) (assign t s)))
  (action pin (pre (<= n x)) (eff (assign f u) (assign x 1.5)))
  (action reset (eff (assign s (set v w)) (assign t (set)) (assign f home)))
  (action test (pre (!= s t)) (eff (assign b (< n x)) (assign n (- n 1)))))
"""

FUZZ_PROBLEM = """\
(problem mixed
  (init (assign b true) (assign n 0) (assign x 4.5) (assign f u)
        (assign s (set u)) (assign t (set v)))
  (goal (= n 9) (member w t)))
"""


def mixed():
    return parse_problem(FUZZ_DOMAIN, FUZZ_PROBLEM)
