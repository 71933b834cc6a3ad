"""Experiment drivers, file formats and the command-line interface."""
