"""Contextual spin measurement simulator: coin game, Born predictions and Bohmian Stern-Gerlach trajectories"""
__version__ = "1.0.0"
