"""Concrete syntax: reading text into terms and printing terms back."""

from .parser import parse_expr, parse_file
from .printer import print_term
from .resolve import Scope, resolve

__all__ = ["parse_file", "parse_expr", "print_term", "Scope", "resolve"]
