"""Toolkit for PT-symmetric quartic potentials and their hermitian partners."""
