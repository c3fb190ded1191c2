from .types import Item, Rating, FeatureCatalog, ScoredList
from .history import HistoryWindow, append_list, window_view, DEFAULT_WINDOW

__all__ = [
    'Item',
    'Rating',
    'FeatureCatalog',
    'ScoredList',
    'HistoryWindow',
    'append_list',
    'window_view',
    'DEFAULT_WINDOW',
]
