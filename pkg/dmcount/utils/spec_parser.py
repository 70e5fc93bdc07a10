"""
This module implements the parser for group specifications such as ``Z4xZ8`` or ``Z2^2 * Z3^2``.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple
import logging
import re

from sympy import factorint

from ..services.abelian import GroupType, PPartition, canonicalize
from .errors import GroupSpecError

MAX_MODULUS = 2**64


class TokenType(Enum):
    """Types of tokens that can appear in a group specification."""
    CYCLIC = "cyclic"
    POWER = "power"
    TIMES = "times"
    UNKNOWN = "unknown"


@dataclass
class Token:
    """Represents a token in the specification."""
    type: TokenType
    value: str
    position: int


@dataclass(frozen=True)
class GroupSpec:
    """A specification string together with the canonical type it denotes."""
    source: str
    group_type: GroupType

    @property
    def canonical(self) -> str:
        return format_group_type(self.group_type)


class GroupSpecParser:
    patterns = [
        (TokenType.CYCLIC, r"z\s*(\d+)"),
        (TokenType.POWER, r"\^\s*(\d+)"),
        (TokenType.TIMES, r"x|\*"),
    ]

    def __init__(self):
        self.tokens: List[Token] = []

    def tokenize(self, text: str) -> List[Token]:
        """Convert the specification into tokens; whitespace is skipped."""
        text = text.lower()
        tokens = []
        position = 0

        while position < len(text):
            if text[position].isspace():
                position += 1
                continue
            for token_type, pattern in self.patterns:
                match = re.match(pattern, text[position:])
                if match:
                    value = match.group(1) if match.groups() else match.group(0)
                    tokens.append(Token(token_type, value, position))
                    position += len(match.group(0))
                    break
            else:
                tokens.append(Token(TokenType.UNKNOWN, text[position], position))
                position += 1

        return tokens

    def parse_factor(self, start_idx: int) -> Tuple[List[Tuple[int, int]], int]:
        """Parse ``Z<m>`` with an optional ``^k``; returns prime-power factors and the next index."""
        token = self.tokens[start_idx]
        if token.type != TokenType.CYCLIC:
            raise GroupSpecError(f"expected Z<m> at position {token.position}, found {token.value!r}")
        modulus = int(token.value)
        if modulus == 0:
            raise GroupSpecError(f"Z0 at position {token.position} is not a finite cyclic group")
        if modulus >= MAX_MODULUS:
            raise GroupSpecError(f"modulus {modulus} cannot be factored within 64-bit bounds")

        current_idx = start_idx + 1
        times = 1
        if current_idx < len(self.tokens) and self.tokens[current_idx].type == TokenType.POWER:
            times = int(self.tokens[current_idx].value)
            current_idx += 1

        # CRT: Z_m splits into one cyclic factor per prime power dividing m
        factors = [(p, e) for p, e in factorint(modulus).items()] * times
        return factors, current_idx

    def parse(self, text: str) -> GroupType:
        self.tokens = self.tokenize(text)
        if not self.tokens:
            raise GroupSpecError("empty group specification")

        unknown = [t for t in self.tokens if t.type == TokenType.UNKNOWN]
        if unknown:
            raise GroupSpecError(
                f"unexpected character {unknown[0].value!r} at position {unknown[0].position}"
            )

        factors: List[Tuple[int, int]] = []
        current_idx = 0
        while True:
            parsed, current_idx = self.parse_factor(current_idx)
            factors.extend(parsed)
            if current_idx == len(self.tokens):
                break
            if self.tokens[current_idx].type != TokenType.TIMES:
                token = self.tokens[current_idx]
                raise GroupSpecError(f"expected 'x' or '*' at position {token.position}")
            current_idx += 1
            if current_idx == len(self.tokens):
                raise GroupSpecError("specification ends with a product operator")

        return canonicalize(factors)


def parse_group_spec(text: str) -> GroupType:
    """
    Parse a group specification into its canonical type.

    Args:
        text (str): e.g. "Z4xZ8", "Z2^2 x Z3^2", "z12"

    Returns:
        GroupType: canonical type (Z1 contributes nothing)
    """
    group_type = GroupSpecParser().parse(text)
    logging.info(f"Parsed {text!r} as {format_group_type(group_type)}")
    return group_type


def read_group_spec(text: str) -> GroupSpec:
    return GroupSpec(text, parse_group_spec(text))


def format_partition(s: PPartition) -> str:
    parts = []
    for a in sorted(set(s.exponents)):
        count = s.exponents.count(a)
        parts.append(f"Z{s.p ** a}" + (f"^{count}" if count > 1 else ""))
    return " x ".join(parts)


def format_group_type(t: GroupType) -> str:
    """Render a type so that parsing the result gives the same type back."""
    if t.is_trivial:
        return "Z1"
    return " x ".join(format_partition(c) for c in t.components)
