import math

import pytest
import torch

from helpers.objective import lambda_at, total_loss
from objects.TrainConfig import LossWeights
from objects.errors import ParameterError, TrainingError

WEIGHTS = LossWeights(lambda1_0=1.0, lambda2_0=0.5, floor_fraction=0.1)


def test_lambda_endpoints_and_midpoint():
    assert lambda_at(0, 100, WEIGHTS) == (1.0, 0.5)
    assert lambda_at(100, 100, WEIGHTS)[0] == pytest.approx(0.1)
    assert lambda_at(50, 100, WEIGHTS)[1] == pytest.approx(0.275)


def test_lambda_rejects_steps_outside_the_run():
    with pytest.raises(ParameterError):
        lambda_at(101, 100, WEIGHTS)
    with pytest.raises(ParameterError):
        lambda_at(0, 0, WEIGHTS)


def test_baseline_total_is_the_denoising_loss():
    assert total_loss(0.7, 0.0, 0.0, 3, 10, WEIGHTS) == pytest.approx(0.7)
    assert total_loss(0.7, None, None, 3, 10, WEIGHTS) == 0.7


def test_all_terms_at_the_first_step():
    assert total_loss(1.0, 1.0, 1.0, 0, 10, WEIGHTS) == pytest.approx(2.5)


def test_tensor_terms_keep_their_graph():
    l1 = torch.tensor(1.0, requires_grad=True)
    total = total_loss(l1, torch.tensor(2.0), None, 0, 10, WEIGHTS)
    total.backward()
    assert total.item() == pytest.approx(3.0)
    assert l1.grad.item() == 1.0


@pytest.mark.parametrize("term", ["l1", "l2", "l3"])
def test_non_finite_term_is_named(term):
    values = {"l1": 1.0, "l2": 1.0, "l3": 1.0, term: math.nan}
    with pytest.raises(TrainingError) as info:
        total_loss(values["l1"], values["l2"], values["l3"], 0, 10, WEIGHTS)
    assert info.value.term == term


def test_loss_weight_validation():
    with pytest.raises(ParameterError):
        LossWeights(lambda1_0=0.0)
    with pytest.raises(ParameterError):
        LossWeights(floor_fraction=1.5)
