from fractions import Fraction

from .errors import DomainError, InvalidInstanceError
from .model import exact


class QueryBase:
    """Argument validation shared by every Robertson-Webb query surface."""

    def __init__(self, n_agents=1):
        self.n_agents = n_agents
        self._validate_agent_count()

    def _validate_agent_count(self):
        if not isinstance(self.n_agents, int) or self.n_agents < 1:
            raise DomainError('Agent count must be a positive integer')

    def _validate_agent(self, i):
        if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < self.n_agents:
            raise DomainError(f'Agent index {i!r} outside 0..{self.n_agents - 1}')
        return i

    def _validate_point(self, x, what='x') -> Fraction:
        x = _coerce(x, what)
        if not 0 <= x <= 1:
            raise DomainError(f'{what} = {x} lies outside the cake [0, 1]')
        return x

    def _validate_interval(self, x, y):
        x, y = self._validate_point(x, 'x'), self._validate_point(y, 'y')
        if x > y:
            raise DomainError(f'Interval [{x}, {y}] is reversed')
        return x, y

    def _validate_mark(self, x, r):
        x = self._validate_point(x, 'x')
        r = _coerce(r, 'mark value')
        if not 0 <= r <= 1:
            raise DomainError(f'Mark value {r} outside [0, 1]')
        return x, r


def _coerce(value, what):
    try:
        return exact(value, what)
    except InvalidInstanceError as exc:
        raise DomainError(str(exc)) from exc
