import json
from pathlib import Path

import numpy as np
import pytest

from logit_server.quantize import TOTAL, quantize_probs

# repo-root conformance vectors shared with the client toolkit
VECTORS = Path(__file__).resolve().parents[2] / "conformance" / "quantize_vectors.json"


class TestConformance:
    def test_shared_vectors(self):
        cases = json.loads(VECTORS.read_text())
        assert len(cases) >= 20
        for case in cases:
            got = quantize_probs(np.array(case["probs"]), total=case["total"])
            assert got.tolist() == case["freqs"], case["name"]

    def test_invariants_on_random_vectors(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            m = int(rng.integers(2, 600))
            probs = rng.random(m) ** int(rng.integers(1, 5))
            if probs.sum() == 0:
                probs[0] = 1.0
            freqs = quantize_probs(probs)
            assert int(freqs.sum()) == TOTAL
            assert int(freqs.min()) >= 1

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            quantize_probs(np.array([0.5, np.nan]))
        with pytest.raises(ValueError):
            quantize_probs(np.array([0.0, 0.0]))
        with pytest.raises(ValueError):
            quantize_probs(np.array([1.0]))
