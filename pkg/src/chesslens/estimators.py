"""Estimator-style front ends: position encoding and strategy recognition.

PositionEncoder is a stateless transformer turning positions into feature
rows. StrategyRecognizer resolves (or fits, given labeled games) a space
configuration and predicts per-game event lists. Both follow the usual
get_params/set_params conventions so they compose with pipelines and
clone().
"""

from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .board import Color
from .calibration import LabeledCase, fit_config
from .dimensions import DIMENSIONS
from .features import encode_both, encode_position
from .recognition import RecognitionEvent, detect_events
from .space import default_config
from .trajectory import build_trajectories
from .validation import (
    as_color,
    as_game_record,
    as_position,
    as_space_config,
    check_smooth_window,
)


class PositionEncoder(TransformerMixin, BaseEstimator):
    """Encode chess positions as rows of the seven-dimension space.

    Parameters
    ----------
    perspective : "white", "black", or "both" (default "both").
        With "both" each row holds the white block then the black block,
        giving 14 columns; otherwise 7.
    """

    def __init__(self, perspective: str = "both"):
        self.perspective = perspective

    def _resolved(self) -> Optional[Color]:
        if self.perspective == "both":
            return None
        return as_color(self.perspective)

    def fit(self, X, y=None):
        self._resolved()
        self.n_features_in_ = 1
        return self

    def transform(self, X) -> np.ndarray:
        color = self._resolved()
        rows = []
        for item in X:
            position = as_position(item)
            if color is None:
                pair = encode_both(position)
                rows.append(tuple(pair.white) + tuple(pair.black))
            else:
                rows.append(tuple(encode_position(position, color)))
        width = 14 if color is None else 7
        return np.array(rows, dtype=float).reshape(len(rows), width)

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        color = self._resolved()
        if color is None:
            names = [f"white_{d.name}" for d in DIMENSIONS]
            names += [f"black_{d.name}" for d in DIMENSIONS]
        else:
            names = [d.name for d in DIMENSIONS]
        return np.asarray(names, dtype=object)


class StrategyRecognizer(BaseEstimator):
    """Detect strategy episodes in whole games.

    Parameters
    ----------
    config : SpaceConfig, dict, or path; None selects the packaged default.
    smooth_window : odd int, membership smoothing window (default 3).
    max_sweeps : calibration sweep limit when fitting with labels.

    fit(X) resolves the configuration; fit(X, y) additionally runs the
    grid calibration, where y[i] lists the expected episodes of game i as
    dicts {"concept", "perspective", "start_move": [lo, hi]} (an empty
    list marks a negative game). predict(X) returns one list of
    RecognitionEvent per game.
    """

    def __init__(self, config=None, smooth_window: int = 3, max_sweeps: int = 8):
        self.config = config
        self.smooth_window = smooth_window
        self.max_sweeps = max_sweeps

    def _base_config(self):
        if self.config is None:
            return default_config()
        return as_space_config(self.config)

    def fit(self, X, y=None):
        base = self._base_config()
        window = check_smooth_window(self.smooth_window)
        if y is None:
            self.config_ = base
            self.calibration_ = None
            self.n_features_in_ = 1
            return self
        records = [as_game_record(item) for item in X]
        if len(records) != len(y):
            raise ValueError(f"got {len(records)} games but {len(y)} label entries")
        positives = []
        negatives = []
        for record, labels in zip(records, y):
            dual = build_trajectories(record)
            if not labels:
                negatives.append(dual)
                continue
            for label in labels:
                window_spec = label["start_move"]
                if isinstance(window_spec, (int, float)):
                    window_spec = [window_spec, window_spec]
                case = LabeledCase(
                    game_id=record.game_id,
                    concept=str(label["concept"]),
                    perspective=as_color(label.get("perspective", "white")),
                    move_window=(int(window_spec[0]), int(window_spec[1])),
                )
                positives.append((case, dual))
        result = fit_config(base, positives, negatives,
                            max_sweeps=self.max_sweeps, smooth_window=window)
        self.config_ = result.config
        self.calibration_ = result
        self.n_features_in_ = 1
        return self

    def predict(self, X) -> List[List[RecognitionEvent]]:
        if not hasattr(self, "config_"):
            raise ValueError("StrategyRecognizer is not fitted; call fit first")
        window = check_smooth_window(self.smooth_window)
        output = []
        for item in X:
            record = as_game_record(item)
            dual = build_trajectories(record)
            output.append(detect_events(dual, self.config_, smooth_window=window))
        return output
