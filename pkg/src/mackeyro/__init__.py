"""RO(C_{p^n})-graded homology of representation spheres as Mackey and Green functors."""

__version__ = "0.1.0"
