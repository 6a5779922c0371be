import pytest
import torch
from hypothesis import given, settings
from hypothesis import strategies as st

from enums.ScheduleShape import ScheduleShape
from helpers.diffusion import denoise_loss, make_schedule, q_sample
from objects.NoiseSchedule import NoiseSchedule
from objects.errors import ParameterError, ShapeMismatchError


def test_two_step_schedule_by_hand():
    schedule = make_schedule(2, 0.1, 0.2)
    assert schedule.alpha_bars.tolist() == pytest.approx([0.9, 0.72])


@pytest.mark.parametrize("shape", list(ScheduleShape))
def test_alpha_bars_strictly_decrease(shape):
    schedule = make_schedule(1000, 1e-4, 0.02, shape)
    assert (schedule.alpha_bars[1:] < schedule.alpha_bars[:-1]).all()
    assert (schedule.betas[1:] >= schedule.betas[:-1]).all()
    assert schedule.betas.min() >= 1e-4 and schedule.betas.max() <= 0.02


def test_default_schedule_ends_near_pure_noise():
    assert make_schedule(1000, 1e-4, 0.02).alpha_bars[-1] < 0.01


@pytest.mark.parametrize("args", [(1, 1e-4, 0.02), (10, 0.02, 1e-4), (10, 0.0, 0.02), (10, 1e-4, 1.0)])
def test_invalid_schedules_are_rejected(args):
    with pytest.raises(ParameterError):
        make_schedule(*args)


def test_q_sample_identity_endpoint():
    schedule = NoiseSchedule(betas=torch.zeros(3, dtype=torch.float64), alpha_bars=torch.ones(3, dtype=torch.float64))
    z0 = torch.randn(2, 3, 4, 4)
    assert torch.allclose(q_sample(z0, 1, torch.randn_like(z0), schedule), z0)


def test_q_sample_without_noise_scales_the_input():
    schedule = make_schedule(10, 0.1, 0.2)
    z0 = torch.randn(2, 3, 4, 4)
    out = q_sample(z0, 4, torch.zeros_like(z0), schedule)
    assert torch.allclose(out, schedule.alpha_bars[4].sqrt().float() * z0)


def test_q_sample_preserves_unit_variance():
    generator = torch.Generator().manual_seed(0)
    schedule = make_schedule(1000, 1e-4, 0.02)
    z0 = torch.randn(10_000, generator=generator)
    eps = torch.randn(10_000, generator=generator)
    z_t = q_sample(z0, 500, eps, schedule)
    assert z_t.var().item() == pytest.approx(1.0, abs=0.05)


def test_q_sample_takes_one_timestep_per_row():
    schedule = make_schedule(10, 0.1, 0.2)
    z0 = torch.ones(2, 1, 2, 2)
    out = q_sample(z0, torch.tensor([0, 9]), torch.zeros_like(z0), schedule)
    assert out[0].mean().item() == pytest.approx(schedule.alpha_bars[0].sqrt().item(), rel=1e-6)
    assert out[1].mean().item() == pytest.approx(schedule.alpha_bars[9].sqrt().item(), rel=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-4.0, max_value=4.0), st.integers(min_value=0, max_value=99))
def test_q_sample_is_linear(scale, t):
    schedule = make_schedule(100, 1e-4, 0.02)
    generator = torch.Generator().manual_seed(t)
    z0 = torch.randn(1, 3, 4, 4, generator=generator)
    eps = torch.randn(1, 3, 4, 4, generator=generator)
    left = q_sample(scale * z0, t, scale * eps, schedule)
    right = scale * q_sample(z0, t, eps, schedule)
    assert torch.allclose(left, right, atol=1e-5)


def test_q_sample_rejects_bad_inputs():
    schedule = make_schedule(10, 0.1, 0.2)
    z0 = torch.zeros(1, 3, 4, 4)
    with pytest.raises(IndexError):
        q_sample(z0, 10, torch.zeros_like(z0), schedule)
    with pytest.raises(ShapeMismatchError):
        q_sample(z0, 0, torch.zeros(1, 3, 4, 5), schedule)


def test_denoise_loss_cases():
    eps = torch.randn(2, 3, 8, 8)
    assert denoise_loss(eps, eps).item() == 0.0
    assert denoise_loss(eps + 1.0, eps).item() == pytest.approx(1.0)


def test_denoise_loss_matches_a_scalar_loop():
    generator = torch.Generator().manual_seed(3)
    a = torch.randn(2, 3, 4, 4, generator=generator)
    b = torch.randn(2, 3, 4, 4, generator=generator)
    total = 0.0
    for x, y in zip(a.flatten().tolist(), b.flatten().tolist()):
        total += (x - y) ** 2
    assert denoise_loss(a, b).item() == pytest.approx(total / a.numel(), rel=1e-5)


def test_denoise_loss_rejects_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        denoise_loss(torch.zeros(1, 3, 4, 4), torch.zeros(1, 3, 4, 3))


def test_denoise_loss_gradient_matches_finite_differences():
    generator = torch.Generator().manual_seed(4)
    eps = torch.randn(2, 3, 4, 4, generator=generator, dtype=torch.float64)
    eps_pred = torch.randn(2, 3, 4, 4, generator=generator, dtype=torch.float64, requires_grad=True)
    assert torch.autograd.gradcheck(lambda p: denoise_loss(p, eps), (eps_pred,), eps=1e-6, atol=1e-6)
