"""Numerical experiments around Hamburger-type uniqueness for Dirichlet series.

Modules
-------
dirichlet_algebra   coefficient arithmetic of ordinary Dirichlet series
laplace_measures    atomic measures, Laplace transforms, interval-mass reconstruction
lfunction_engine    Dirichlet characters and their L-functions
zero_locator        argument-principle counts and critical-line zeros
hamburger_tester    the ratio/dual tests and zero-comparison experiment
cli                 command-line front end (``python -m hamburger``)
"""

__version__ = "0.1.0"
