from .lexer import Token, tokenize
from .mixfix import TermParser
from .printer import print_equation, print_rule, print_term, print_theory
from .theory_parser import load_theory, parse_modules, parse_term, parse_theory

__all__ = [
    "TermParser",
    "Token",
    "load_theory",
    "parse_modules",
    "parse_term",
    "parse_theory",
    "print_equation",
    "print_rule",
    "print_term",
    "print_theory",
    "tokenize",
]
