"""Local and global optimizers for molecular-simulation style problems.

Local: steepest descent, damped Newtonian dynamics, conjugate gradients,
BFGS and 1-D Newton. Global: binary genetic algorithm and simulated
annealing. Applications: GaAs quantum-well device tuning and
Lennard-Jones clusters.
"""
__version__ = "0.1.0"
