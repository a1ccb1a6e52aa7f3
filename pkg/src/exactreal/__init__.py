"""Exact-decision real numbers over expression DAGs with pluggable error bounds."""

from .bigfloat import BigFloat, DomainError, RoundingMode
from .dag import Counters, NodeKind
from .errorbound import EXACT, DirectError, LogFloatError, LogIntError, Rep
from .evaluate import Context, DivisionByZero, StrategyConfig, preset
from .real import Ordering, Real, compare, root, sqrt

__version__ = '0.1.0'

__all__ = ['BigFloat', 'DomainError', 'RoundingMode', 'Counters', 'NodeKind',
           'EXACT', 'DirectError', 'LogIntError', 'LogFloatError', 'Rep',
           'Context', 'DivisionByZero', 'StrategyConfig', 'preset', 'Real',
           'Ordering', 'compare', 'root', 'sqrt']
