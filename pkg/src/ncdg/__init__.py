"""ncdg: exact noncommutative differential geometry on finite-dimensional *-algebras."""

__version__ = "0.1.0"
