"""Model hyperparameters."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SatModelConfig:
    """Shape of the classifier.

    The head of the sequence is one [class] token plus ``num_concept_tokens``
    learnable [concept] tokens; after ``num_blocks_pre_slice`` transformer
    blocks everything but the head is discarded (head slicing), fixing the
    sequence length seen by the remaining blocks at ``head_keep`` no matter
    how many clauses came in.
    """

    max_vars: int
    embed_dim: int = 32
    num_heads: int = 8
    num_concept_tokens: int = 31
    num_blocks_pre_slice: int = 1  # slice after the first layer
    num_blocks_post_slice: int = 4
    learning_rate: float = 1e-4
    mlp_ratio: int = 4
    orientation: str = "rows"

    def __post_init__(self) -> None:
        if self.max_vars < 1:
            raise ValueError("max_vars must be >= 1")
        if self.embed_dim % self.num_heads != 0:
            raise ValueError(
                f"embed_dim {self.embed_dim} not divisible by "
                f"num_heads {self.num_heads}"
            )
        if self.num_concept_tokens < 0:
            raise ValueError("num_concept_tokens must be >= 0")
        if self.num_blocks_pre_slice < 1 or self.num_blocks_post_slice < 0:
            raise ValueError("need >= 1 pre-slice block and >= 0 post-slice blocks")
        if self.orientation not in ("rows", "columns"):
            raise ValueError(f"orientation must be 'rows' or 'columns'")

    @property
    def head_keep(self) -> int:
        return 1 + self.num_concept_tokens

    @property
    def slice_after_layer(self) -> int:
        return self.num_blocks_pre_slice
