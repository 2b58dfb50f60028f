"""
richkit - exact Schubert and Richardson combinatorics with brute-force checks over F_q.

This package provides functionality to:
- Compute with permutations: rank tables, Bruhat order, essential sets, patterns
- Take Demazure products by reduced words or by rank tables
- Do exact linear algebra over prime fields
- Build flags, their relative positions, Fix spaces and deformation spaces
- Enumerate flag varieties and degeneracy loci over small finite fields
- Run named verification suites and write deterministic JSON reports
"""

__version__ = "0.1.0"
__author__ = "richkit developers"
