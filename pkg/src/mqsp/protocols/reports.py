"""Build report attached to constructed states."""

from dataclasses import dataclass


@dataclass(frozen=True)
class BuildReport:
    grid_max_error: float
    rescale_applied: float
    truncation_bound: float = None

    def to_dict(self):
        return {
            "grid_max_error": float(self.grid_max_error),
            "rescale_applied": float(self.rescale_applied),
            "truncation_bound": None if self.truncation_bound is None else float(self.truncation_bound),
        }
