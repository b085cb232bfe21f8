# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import itertools
import math
from collections import defaultdict

import numpy as np
from django.test import SimpleTestCase

from .ctc import ctc_loss, ctc_forward_backward, required_frames
from .exceptions import LossError, CTCInfeasibleError, CTCNumericError, EmptyMaskError
from .masking import MaskedSequence, sample_mask, apply_mask
from .objectives import LossConfig, ConventionalSmoothing, masked_ce, masked_accuracy, matreg_loss, combined_loss
from common_utils.tests_common import ArrayAssertMixin, GradCheckMixin
from tensor import ops
from tensor.core import tensor, is_debug, set_debug
from tensor.exceptions import ShapeError


BLANK = 0


def collapse(path):
	out = []
	previous = None
	for label in path:
		if label != previous and label != BLANK:
			out.append(label)
		previous = label
	return out


def path_likelihoods(log_probs):
	"""
	Pravdepodobnosť každého cieľa ako súčet cez všetky cesty, ktoré sa naň
	zlúčia.
	"""
	frames, size = log_probs.shape
	totals = defaultdict(float)
	for path in itertools.product(range(size), repeat=frames):
		totals[tuple(collapse(path))] += math.exp(sum(log_probs[t, label] for t, label in enumerate(path)))
	return totals


def random_log_probs(rng, frames, size):
	x = rng.normal(size=(frames, size))
	return ops.log_softmax(tensor(x)).values


class CTCTest(ArrayAssertMixin, GradCheckMixin, SimpleTestCase):
	def test_single_path(self):
		log_probs = np.log([[0.4, 0.6]])
		self.assertAlmostEqual(ctc_loss(tensor(log_probs), [1]).item(), -math.log(0.6), places=12)
		self.assertAlmostEqual(ctc_loss(tensor(log_probs), [1]).item(), 0.5108, places=4)

	def test_two_frames_uniform(self):
		log_probs = np.log(np.full((2, 2), 0.5))
		self.assertAlmostEqual(ctc_loss(tensor(log_probs), [1]).item(), -math.log(0.75), places=12)

	def test_empty_target(self):
		rng = np.random.default_rng(1)
		log_probs = random_log_probs(rng, 5, 3)
		self.assertAlmostEqual(ctc_loss(tensor(log_probs), []).item(), -np.sum(log_probs[:, BLANK]), places=10)

	def test_brute_force(self):
		rng = np.random.default_rng(5)
		checked = 0
		for frames in range(1, 7):
			for size in range(2, 5):
				log_probs = random_log_probs(rng, frames, size)
				totals = path_likelihoods(log_probs)
				for target_length in range(0, 4):
					for target in itertools.product(range(1, size), repeat=target_length):
						if required_frames(list(target)) > frames:
							self.assertNotIn(target, totals)
							continue
						nll, __ = ctc_forward_backward(log_probs, list(target), BLANK)
						self.assertAlmostEqual(nll, -math.log(totals[target]), delta=1e-9)
						checked += 1
		self.assertGreater(checked, 200)

	def test_gradient(self):
		rng = np.random.default_rng(11)
		log_probs = random_log_probs(rng, 6, 4)
		for target in ([1, 2], [3, 3], [2, 1, 3]):
			self.assertGradCheck(lambda t: ctc_loss(t, target), log_probs, min_magnitude=1e-4)

	def test_gradient_is_negative_occupancy(self):
		rng = np.random.default_rng(3)
		log_probs = random_log_probs(rng, 4, 3)
		__, grad = ctc_forward_backward(log_probs, [1, 2], BLANK)
		# every frame emits exactly one symbol
		self.assertArrayClose(grad.sum(axis=1), -np.ones(4), atol=1e-10)

	def test_infeasible(self):
		log_probs = np.log(np.full((2, 3), 1.0 / 3))
		with self.assertRaises(CTCInfeasibleError):
			ctc_loss(tensor(log_probs), [1, 1])
		with self.assertRaises(CTCInfeasibleError):
			ctc_loss(tensor(log_probs), [1, 2, 1])

	def test_numeric_failure(self):
		log_probs = np.log(np.array([[0.5, 0.0, 0.5], [0.5, 0.0, 0.5]]))
		previous = is_debug()
		set_debug(True)
		try:
			with self.assertRaises(CTCNumericError) as ctx:
				ctc_loss(tensor(log_probs), [1])
		finally:
			set_debug(previous)
		self.assertNotIsInstance(ctx.exception, CTCInfeasibleError)
		self.assertEqual(ctx.exception.exit_code, 3)

	def test_blank_in_target(self):
		with self.assertRaises(LossError):
			ctc_loss(tensor(np.log(np.full((3, 3), 1.0 / 3))), [0])


class MaskingTest(SimpleTestCase):
	def test_single(self):
		rng = np.random.default_rng(0)
		for __ in range(20):
			self.assertEqual(sample_mask(1, rng), [0])

	def test_empty(self):
		self.assertEqual(sample_mask(0, np.random.default_rng(0)), [])

	def test_deterministic(self):
		first = sample_mask(10, np.random.default_rng(42))
		second = sample_mask(10, np.random.default_rng(42))
		self.assertEqual(first, second)
		self.assertEqual(len(set(first)), len(first))
		self.assertTrue(all(0 <= pos < 10 for pos in first))

	def test_count_distribution(self):
		rng = np.random.default_rng(2021)
		counts = np.zeros(5)
		draws = 10000
		for __ in range(draws):
			counts[len(sample_mask(4, rng))] += 1
		self.assertEqual(counts[0], 0)
		for m in range(1, 5):
			self.assertAlmostEqual(counts[m] / draws, 0.25, delta=0.02)

	def test_apply_mask(self):
		masked = apply_mask([5, 6, 7], [2, 0], 9)
		self.assertEqual(masked.ids, [9, 6, 9])
		self.assertEqual(masked.mask_positions, [0, 2])
		self.assertEqual(masked.observed_positions, [1])

	def test_invalid(self):
		with self.assertRaises(LossError):
			MaskedSequence([1, 2], [1], 9)
		with self.assertRaises(LossError):
			apply_mask([1, 2], [2], 9)

	def test_fill(self):
		masked = apply_mask([5, 6, 7], [0, 2], 9)
		filled = masked.fill({2: 4})
		self.assertEqual(filled.ids, [9, 6, 4])
		self.assertEqual(filled.mask_positions, [0])
		with self.assertRaises(LossError):
			filled.fill({1: 3})
		with self.assertRaises(LossError):
			filled.fill({0: 9})


class MaskedCETest(SimpleTestCase):
	def test_confident(self):
		logits = np.array([[0.0, 1000.0, 0.0], [3.0, 1.0, 2.0]])
		loss = masked_ce(tensor(logits), [1, 0], [0])
		self.assertAlmostEqual(loss.item(), 0.0, places=12)

	def test_uniform(self):
		logits = np.zeros((3, 7))
		self.assertAlmostEqual(masked_ce(tensor(logits), [1, 2, 3], [0, 2]).item(), math.log(7), places=12)

	def test_smoothed_sum(self):
		rng = np.random.default_rng(8)
		size = 30
		logits = rng.normal(size=(2, size))
		neighbours = list(range(10, 20))

		def smooth(target):
			q = np.zeros(size)
			q[target] = 0.9
			q[neighbours] = 0.01
			return q

		loss = masked_ce(tensor(logits), [4, 5], [1], smooth=smooth).item()
		log_p = logits[1] - np.log(np.sum(np.exp(logits[1])))
		expected = -(0.9 * log_p[5] + sum(0.01 * log_p[n] for n in neighbours))
		self.assertAlmostEqual(loss, expected, places=10)

	def test_conventional(self):
		rng = np.random.default_rng(9)
		logits = rng.normal(size=(1, 5))
		smooth = ConventionalSmoothing(0.1, 5)
		self.assertAlmostEqual(smooth(2).sum(), 1.0, places=12)
		log_p = logits[0] - np.log(np.sum(np.exp(logits[0])))
		expected = -(0.9 * log_p[2] + sum(0.025 * log_p[n] for n in (0, 1, 3, 4)))
		self.assertAlmostEqual(masked_ce(tensor(logits), [2], [0], smooth=smooth).item(), expected, places=10)

	def test_conventional_skips_mask_and_blank(self):
		smooth = ConventionalSmoothing(0.1, 6, excluded=(0, 2))
		q = smooth(4)
		self.assertEqual(q[0], 0.0)
		self.assertEqual(q[2], 0.0)
		self.assertAlmostEqual(q[4], 0.9)
		for idx in (1, 3, 5):
			self.assertAlmostEqual(q[idx], 0.1 / 3)
		self.assertAlmostEqual(q.sum(), 1.0, places=12)

	def test_unmasked_ignored(self):
		rng = np.random.default_rng(10)
		logits = rng.normal(size=(3, 4))
		first = masked_ce(tensor(logits), [1, 2, 3], [1]).item()
		logits[0] += 5.0
		logits[2] -= 3.0
		self.assertEqual(masked_ce(tensor(logits), [1, 2, 3], [1]).item(), first)

	def test_empty_mask(self):
		with self.assertRaises(EmptyMaskError):
			masked_ce(tensor(np.zeros((2, 3))), [1, 2], [])

	def test_accuracy(self):
		logits = np.array([[0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
		self.assertEqual(masked_accuracy(logits, [1, 1, 0], [0, 1, 2]), (1, 3))


class MatRegTest(GradCheckMixin, SimpleTestCase):
	def setUp(self):
		self.rng = np.random.default_rng(77)

	def test_identical(self):
		w = self.rng.normal(size=(4, 6))
		self.assertAlmostEqual(matreg_loss(tensor(w), tensor(w)).item(), 0.0, places=12)

	def test_orthogonal(self):
		a = np.array([[1.0, 0.0], [0.0, 1.0]])
		b = np.array([[0.0, 1.0], [1.0, 0.0]])
		self.assertAlmostEqual(matreg_loss(tensor(a), tensor(b)).item(), 1.0, places=12)

	def test_opposite(self):
		w = self.rng.normal(size=(3, 5))
		self.assertAlmostEqual(matreg_loss(tensor(w), tensor(-w)).item(), 2.0, places=12)

	def test_range_and_scale(self):
		for __ in range(10):
			a = self.rng.normal(size=(5, 7))
			b = self.rng.normal(size=(5, 7))
			value = matreg_loss(tensor(a), tensor(b)).item()
			self.assertTrue(0.0 <= value <= 2.0)
			self.assertAlmostEqual(matreg_loss(tensor(3.7 * a), tensor(b)).item(), value, places=12)

	def test_zero_column(self):
		a = np.array([[0.0, 1.0], [0.0, 0.0]])
		b = np.array([[1.0, 1.0], [0.0, 0.0]])
		x = tensor(a, requires_grad=True)
		with self.assertLogs('codeswitch', level='WARNING'):
			loss = matreg_loss(x, tensor(b))
		self.assertAlmostEqual(loss.item(), 0.5, places=12)
		loss.backward()
		self.assertEqual(list(x.grad[:, 0]), [0.0, 0.0])

	def test_shape_mismatch(self):
		with self.assertRaises(ShapeError):
			matreg_loss(tensor(np.ones((2, 3))), tensor(np.ones((3, 2))))

	def test_gradient(self):
		a = self.rng.normal(size=(4, 5))
		b = self.rng.normal(size=(4, 5))
		self.assertGradCheck(lambda t: matreg_loss(t, tensor(b)), a)
		self.assertGradCheck(lambda t: matreg_loss(tensor(a), t), b)

	def test_descent(self):
		a = tensor(self.rng.normal(size=(8, 10)), requires_grad=True)
		b = tensor(self.rng.normal(size=(8, 10)), requires_grad=True)
		initial = matreg_loss(a, b).item()
		for __ in range(100):
			a.zero_grad()
			b.zero_grad()
			matreg_loss(a, b).backward()
			a.values = a.values - 10.0 * a.grad
			b.values = b.values - 10.0 * b.grad
		self.assertLess(matreg_loss(a, b).item(), 0.1 * initial)


class CombinedLossTest(SimpleTestCase):
	def test_arithmetic(self):
		cfg = LossConfig()
		self.assertAlmostEqual(combined_loss(1.0, 2.0, 2.0, 0.0, cfg).item(), 3.1, places=12)

	def test_ctc_only(self):
		cfg = LossConfig(alpha=1.0)
		self.assertAlmostEqual(combined_loss(1.5, 2.0, 7.0, 0.0, cfg).item(), 1.5, places=12)

	def test_no_regularizer(self):
		cfg = LossConfig(beta=0.0)
		with_reg = combined_loss(1.0, 1.0, 1.0, 100.0, cfg).item()
		self.assertAlmostEqual(with_reg, combined_loss(1.0, 1.0, 1.0, 0.0, cfg).item(), places=12)

	def test_missing_terms(self):
		cfg = LossConfig()
		self.assertAlmostEqual(combined_loss(1.0, None, 2.0, None, cfg).item(), 0.3 + 1.4, places=12)

	def test_gradient_flows(self):
		x = tensor([2.0], requires_grad=True)
		combined_loss(ops.sum_(x), ops.sum_(x * x), None, None, LossConfig()).backward()
		self.assertAlmostEqual(x.grad[0], 0.3 + 0.7 * 4.0, places=12)

	def test_defaults(self):
		cfg = LossConfig()
		self.assertEqual((cfg.alpha, cfg.beta, cfg.epsilon), (0.3, 1e-4, 0.1))
		with self.assertRaises(LossError):
			LossConfig(alpha=1.5)
		with self.assertRaises(LossError):
			LossConfig(smoothing='label')
