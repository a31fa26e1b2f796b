import numpy as np
import pytest
import torch

from satslice import Problem, SatModelConfig, SatTransformer, head_slice, make_batch


def random_problem(rng, n, m, label=1):
    return Problem(rng.integers(-1, 2, size=(m, n)).astype(np.int8), label)


def batch_of(problems, width, dtype=torch.float32):
    return make_batch(problems, width, dtype=dtype)


CFG = SatModelConfig(max_vars=10)


class TestEmbed:
    def test_head_prepended_length(self):
        model = SatTransformer(CFG)
        rng = np.random.default_rng(0)
        batch = batch_of([random_problem(rng, 10, 100)], 10)
        seq, pad_mask = model.embed(batch)
        assert seq.shape == (1, 132, CFG.embed_dim)
        assert pad_mask.shape == (1, 132)
        assert not pad_mask[0, : CFG.head_keep].any()

    def test_zero_clause_input_is_head_only(self):
        model = SatTransformer(CFG)
        batch = batch_of([Problem(np.zeros((0, 10), dtype=np.int8), 0)], 10)
        seq, _ = model.embed(batch)
        assert seq.shape == (1, 32, CFG.embed_dim)
        logits = model(batch)
        assert logits.shape == (1,)

    def test_zeroed_projection_collapses_clause_embeddings(self):
        model = SatTransformer(CFG)
        with torch.no_grad():
            model.patch_embed.weight.zero_()
            model.patch_embed.bias.zero_()
        rng = np.random.default_rng(1)
        batch = batch_of([random_problem(rng, 10, 7)], 10)
        seq, _ = model.embed(batch)
        clause_part = seq[0, CFG.head_keep :]
        assert torch.equal(clause_part, torch.zeros_like(clause_part))

    def test_width_mismatch_rejected(self):
        model = SatTransformer(CFG)
        rng = np.random.default_rng(2)
        batch = batch_of([random_problem(rng, 8, 3)], 8)
        with pytest.raises(ValueError):
            model.embed(batch)


class TestHeadSlice:
    def test_cuts_to_head(self):
        seq = torch.randn(2, 132, 16)
        assert head_slice(seq, 32).shape == (2, 32, 16)

    def test_exact_length_is_identity(self):
        seq = torch.randn(1, 32, 8)
        assert torch.equal(head_slice(seq, 32), seq)

    def test_short_sequence_rejected(self):
        with pytest.raises(ValueError):
            head_slice(torch.randn(1, 16, 8), 32)


class TestForward:
    def test_zeroed_classifier_gives_zero_logits(self):
        model = SatTransformer(CFG)
        with torch.no_grad():
            model.classifier.weight.zero_()
            model.classifier.bias.zero_()
        rng = np.random.default_rng(3)
        batch = batch_of([random_problem(rng, 10, m) for m in (3, 12, 40)], 10)
        assert torch.equal(model(batch), torch.zeros(3))

    def test_permutation_invariance(self):
        model = SatTransformer(CFG, dtype=torch.float64).eval()
        rng = np.random.default_rng(4)
        prob = random_problem(rng, 10, 25)
        base = model(batch_of([prob], 10, torch.float64)).item()
        for _ in range(5):
            perm = rng.permutation(25)
            shuffled = Problem(prob.cells[perm], prob.label)
            out = model(batch_of([shuffled], 10, torch.float64)).item()
            assert abs(out - base) <= 1e-9 * max(1.0, abs(base))

    def test_padding_does_not_change_logits(self):
        # the same problem must score identically alone and padded inside a
        # batch next to a longer one
        model = SatTransformer(CFG, dtype=torch.float64).eval()
        rng = np.random.default_rng(5)
        short = random_problem(rng, 10, 6)
        long = random_problem(rng, 10, 48)
        alone = model(batch_of([short], 10, torch.float64)).item()
        padded = model(batch_of([short, long], 10, torch.float64))[0].item()
        assert abs(alone - padded) <= 1e-9 * max(1.0, abs(alone))

    def test_duplicate_clause_changes_logit_in_general(self):
        # attention is not multiset-blind over values: a repeated clause is
        # not equivalent to one occurrence (characterization, not a contract)
        model = SatTransformer(CFG, dtype=torch.float64).eval()
        rng = np.random.default_rng(6)
        cells = rng.integers(-1, 2, size=(8, 10)).astype(np.int8)
        once = Problem(cells, 1)
        doubled = Problem(np.vstack([cells, cells[:1]]), 1)
        a = model(batch_of([once], 10, torch.float64)).item()
        b = model(batch_of([doubled], 10, torch.float64)).item()
        assert abs(a - b) > 1e-9

    def test_post_slice_activations_are_clause_count_independent(self):
        model = SatTransformer(CFG)
        seen_shapes = []
        hook = model.post_blocks[0].register_forward_hook(
            lambda mod, inp, out: seen_shapes.append(tuple(inp[0].shape))
        )
        try:
            rng = np.random.default_rng(7)
            for m in (5, 50, 300):
                model(batch_of([random_problem(rng, 10, m)], 10))
        finally:
            hook.remove()
        assert seen_shapes == [(1, 32, CFG.embed_dim)] * 3

    def test_parameter_count_is_length_independent(self):
        model = SatTransformer(CFG)
        count = sum(p.numel() for p in model.parameters())
        rng = np.random.default_rng(8)
        model(batch_of([random_problem(rng, 10, 500)], 10))
        assert sum(p.numel() for p in model.parameters()) == count
        # no parameter dimension scales with clause count
        assert all(
            500 not in p.shape and 532 not in p.shape for p in model.parameters()
        )


class TestConfig:
    def test_head_keep_is_class_plus_concepts(self):
        assert CFG.head_keep == 32
        assert SatModelConfig(max_vars=4, num_concept_tokens=5).head_keep == 6

    def test_embed_dim_divisibility_enforced(self):
        with pytest.raises(ValueError):
            SatModelConfig(max_vars=4, embed_dim=30, num_heads=8)

    def test_slice_after_layer_alias(self):
        assert CFG.slice_after_layer == CFG.num_blocks_pre_slice == 1
