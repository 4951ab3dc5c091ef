"""infalex: exact infinitesimal Alexander invariants of quadratic graded Lie
algebras, Johnson modules for small genus, and Fox-calculus point tests on
characteristic varieties."""

__version__ = "0.1.0"
