from .queries import QueryMixin
from .stats import StatsMixin
