"""Rigorous Lambert W in ball arithmetic."""
