# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import numpy as np

from .core import Tensor, tensor


def numeric_gradient(fn, values, h=1e-5):
	values = np.array(values, dtype=np.float64)
	grad = np.zeros_like(values)
	flat = values.reshape(-1)
	grad_flat = grad.reshape(-1)
	for idx in range(flat.size):
		original = flat[idx]
		flat[idx] = original + h
		plus = fn(Tensor(values)).item()
		flat[idx] = original - h
		minus = fn(Tensor(values)).item()
		flat[idx] = original
		grad_flat[idx] = (plus - minus) / (2.0 * h)
	return grad


def analytic_gradient(fn, values):
	x = tensor(values, requires_grad=True)
	fn(x).backward()
	if x.grad is None:
		return np.zeros_like(x.values)
	return x.grad


def grad_check(fn, x, h=1e-5, min_magnitude=0.0):
	"""
	Maximálna relatívna odchýlka analytického gradientu od centrálnych
	diferencií. Súradnice, kde sú oba gradienty menšie ako `min_magnitude`,
	sa preskakujú.
	"""
	values = x.values if isinstance(x, Tensor) else np.asarray(x, dtype=np.float64)
	analytic = analytic_gradient(fn, values)
	numeric = numeric_gradient(fn, values, h=h)
	diff = np.abs(analytic - numeric)
	denominator = np.abs(analytic) + np.abs(numeric) + 1e-12
	relative = diff / denominator
	if min_magnitude > 0:
		relative = np.where(np.maximum(np.abs(analytic), np.abs(numeric)) < min_magnitude, 0.0, relative)
	if relative.size == 0:
		return 0.0
	return float(np.max(relative))


def parameter_grad_check(loss_fn, param, h=1e-5, min_magnitude=0.0, max_coords=None, rng=None):
	"""
	Ako grad_check, ale pre list grafu, ktorý používa `loss_fn` priamo
	(parameter modelu). Pri `max_coords` sa kontroluje náhodná podmnožina
	súradníc.
	"""
	original = param.values.copy()
	param.zero_grad()
	loss_fn().backward()
	analytic = param.grad.copy() if param.grad is not None else np.zeros_like(original)
	param.zero_grad()
	coords = np.arange(original.size)
	if max_coords is not None and original.size > max_coords:
		rng = rng if rng is not None else np.random.default_rng(0)
		coords = np.sort(rng.choice(original.size, size=max_coords, replace=False))
	worst = 0.0
	try:
		for coord in coords:
			values = original.copy()
			values.reshape(-1)[coord] += h
			param.values = values
			plus = loss_fn().item()
			values = original.copy()
			values.reshape(-1)[coord] -= h
			param.values = values
			minus = loss_fn().item()
			numeric = (plus - minus) / (2.0 * h)
			exact = analytic.reshape(-1)[coord]
			if max(abs(exact), abs(numeric)) < min_magnitude:
				continue
			worst = max(worst, abs(exact - numeric) / (abs(exact) + abs(numeric) + 1e-12))
	finally:
		param.values = original
	return worst
