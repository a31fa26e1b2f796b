"""The classifier: clause tokens in, one SAT logit out.

Each token (a row or column of the cell matrix) is linearly projected to the
embedding dimension -- deliberately with no positional information, so the
model is equivariant over token order and the head outputs are invariant
under clause permutations. A learnable head of one [class] token and a block
of [concept] tokens is prepended; after the pre-slice blocks the sequence is
cut down to the head alone, making the cost of the remaining blocks (and the
activation footprint) independent of the clause count. The [class] token
feeds the final classifier.
"""

from __future__ import annotations

import torch
from torch import nn

from .config import SatModelConfig
from .data import TokenBatch


class PreNormBlock(nn.Module):
    """normalize -> attention -> residual; normalize -> MLP -> residual."""

    def __init__(self, dim: int, heads: int, mlp_ratio: int):
        super().__init__()
        self.norm1 = nn.LayerNorm(dim)
        self.attn = nn.MultiheadAttention(dim, heads, batch_first=True)
        self.norm2 = nn.LayerNorm(dim)
        self.mlp = nn.Sequential(
            nn.Linear(dim, mlp_ratio * dim),
            nn.GELU(),
            nn.Linear(mlp_ratio * dim, dim),
        )

    def forward(
        self, x: torch.Tensor, key_padding_mask: torch.Tensor | None = None
    ) -> torch.Tensor:
        h = self.norm1(x)
        attended, _ = self.attn(
            h, h, h, key_padding_mask=key_padding_mask, need_weights=False
        )
        x = x + attended
        return x + self.mlp(self.norm2(x))


def head_slice(seq: torch.Tensor, head_keep: int) -> torch.Tensor:
    """Keep only the first ``head_keep`` tokens of a (B, L, D) sequence."""
    if seq.shape[-2] < head_keep:
        raise ValueError(
            f"sequence length {seq.shape[-2]} shorter than head {head_keep}"
        )
    return seq[..., :head_keep, :]


class SatTransformer(nn.Module):
    def __init__(self, cfg: SatModelConfig, dtype: torch.dtype = torch.float32):
        super().__init__()
        self.cfg = cfg
        self.patch_embed = nn.Linear(cfg.max_vars, cfg.embed_dim)
        self.head_tokens = nn.Parameter(
            torch.empty(cfg.head_keep, cfg.embed_dim).normal_(std=0.02)
        )
        self.pre_blocks = nn.ModuleList(
            PreNormBlock(cfg.embed_dim, cfg.num_heads, cfg.mlp_ratio)
            for _ in range(cfg.num_blocks_pre_slice)
        )
        self.post_blocks = nn.ModuleList(
            PreNormBlock(cfg.embed_dim, cfg.num_heads, cfg.mlp_ratio)
            for _ in range(cfg.num_blocks_post_slice)
        )
        self.final_norm = nn.LayerNorm(cfg.embed_dim)
        self.classifier = nn.Linear(cfg.embed_dim, 1)
        if dtype is not torch.float32:
            self.to(dtype)

    def embed(self, batch: TokenBatch) -> tuple[torch.Tensor, torch.Tensor]:
        """Project tokens and prepend the head; returns (sequence, pad_mask).

        The pad mask follows the attention convention: True marks positions
        keys may NOT come from (padding); head tokens are always valid.
        """
        tokens = batch.tokens
        if tokens.shape[-1] != self.cfg.max_vars:
            raise ValueError(
                f"token width {tokens.shape[-1]} != model width {self.cfg.max_vars}"
            )
        tokens = tokens.to(self.patch_embed.weight.dtype)
        embedded = self.patch_embed(tokens)
        head = self.head_tokens.unsqueeze(0).expand(len(tokens), -1, -1)
        seq = torch.cat([head, embedded], dim=1)
        head_valid = torch.ones(
            (len(tokens), self.cfg.head_keep), dtype=torch.bool,
            device=tokens.device,
        )
        pad_mask = ~torch.cat([head_valid, batch.mask], dim=1)
        return seq, pad_mask

    def forward(self, batch: TokenBatch) -> torch.Tensor:
        seq, pad_mask = self.embed(batch)
        for block in self.pre_blocks:
            seq = block(seq, key_padding_mask=pad_mask)
        seq = head_slice(seq, self.cfg.head_keep)
        for block in self.post_blocks:
            seq = block(seq)
        class_token = self.final_norm(seq[:, 0])
        return self.classifier(class_token).squeeze(-1)
