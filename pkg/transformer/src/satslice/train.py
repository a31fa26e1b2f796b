"""Training and evaluation over pipeline-emitted datasets."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch

from .config import SatModelConfig
from .data import Problem, load_problems, make_batch
from .model import SatTransformer


@dataclass
class StepMetrics:
    step: int
    loss: float
    batch_accuracy: float

    def to_json(self) -> str:
        return json.dumps(
            {"step": self.step, "loss": self.loss, "accuracy": self.batch_accuracy}
        )


def batches_of(
    problems: list[Problem],
    cfg: SatModelConfig,
    batch_size: int,
    generator: torch.Generator | None = None,
    dtype: torch.dtype = torch.float32,
):
    """Shuffled fixed-size batches, repeating over the dataset forever."""
    while True:
        order = (
            torch.randperm(len(problems), generator=generator).tolist()
            if generator is not None
            else list(range(len(problems)))
        )
        for start in range(0, len(order) - batch_size + 1, batch_size):
            chunk = [problems[i] for i in order[start : start + batch_size]]
            yield make_batch(chunk, cfg.max_vars, cfg.orientation, dtype)


def train(
    model: SatTransformer,
    dataset: str | Path | list[Problem],
    steps: int,
    batch_size: int = 64,
    seed: int = 0,
    metrics_path: str | Path | None = None,
    eval_every: int = 0,
    eval_dataset: list[Problem] | None = None,
    stop_at_accuracy: float | None = None,
) -> list[StepMetrics]:
    """Binary cross-entropy on the SAT logit with Adam.

    Metrics stream back per step and optionally to a line-delimited JSON
    file. With ``eval_every``/``stop_at_accuracy`` the loop evaluates a
    held-out set periodically and stops early once the target is reached.
    """
    problems = (
        dataset if isinstance(dataset, list) else load_problems(dataset)
    )
    generator = torch.Generator().manual_seed(seed)
    dtype = next(model.parameters()).dtype
    source = batches_of(problems, model.cfg, batch_size, generator, dtype)
    optimizer = torch.optim.Adam(model.parameters(), lr=model.cfg.learning_rate)
    loss_fn = torch.nn.BCEWithLogitsLoss()
    metrics: list[StepMetrics] = []
    sink = open(metrics_path, "w", encoding="utf-8") if metrics_path else None
    try:
        for step in range(1, steps + 1):
            batch = next(source)
            logits = model(batch)
            loss = loss_fn(logits, batch.labels.to(logits.dtype))
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            with torch.no_grad():
                acc = ((logits > 0) == (batch.labels > 0.5)).float().mean()
            record = StepMetrics(step, loss.item(), acc.item())
            metrics.append(record)
            if sink:
                sink.write(record.to_json() + "\n")
            if (
                eval_every
                and eval_dataset is not None
                and stop_at_accuracy is not None
                and step % eval_every == 0
            ):
                if evaluate_accuracy(model, eval_dataset) >= stop_at_accuracy:
                    break
    finally:
        if sink:
            sink.close()
    return metrics


@torch.no_grad()
def evaluate_accuracy(
    model: SatTransformer,
    dataset: str | Path | list[Problem],
    batch_size: int = 256,
) -> float:
    problems = (
        dataset if isinstance(dataset, list) else load_problems(dataset)
    )
    if not problems:
        raise ValueError("empty evaluation dataset")
    dtype = next(model.parameters()).dtype
    correct = 0
    for start in range(0, len(problems), batch_size):
        chunk = problems[start : start + batch_size]
        batch = make_batch(chunk, model.cfg.max_vars, model.cfg.orientation, dtype)
        logits = model(batch)
        correct += int(((logits > 0) == (batch.labels > 0.5)).sum())
    return correct / len(problems)
