"""Toolkit for EIT-based three-level lambda quantum heat engines.

Submodules
----------
atomdata   alkali level energies, transition rates, dipoles, Rabi frequencies
physics    steady-state engine evaluation (brightness, temperature, work, ergotropy)
datagen    labeled dataset generation over the engine parameter grid
mlp        from-scratch feedforward network with Adam
analysis   regime filtering, per-atom comparisons, ergotropy curve fitting
cli        command-line entry point
"""

__version__ = "0.1.0"
