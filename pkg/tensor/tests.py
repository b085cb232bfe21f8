# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import math

import numpy as np
from django.test import SimpleTestCase

from . import ops
from .core import tensor, set_debug, is_debug
from .exceptions import ShapeError, TensorIndexError, NonFiniteError, GraphError
from .gradcheck import grad_check
from .primitives import apply_primitive, PRIMITIVES
from common_utils.tests_common import ArrayAssertMixin, GradCheckMixin


def weighted_sum(out, weights):
	return ops.sum_(ops.mul(out, weights))


class ForwardTest(ArrayAssertMixin, SimpleTestCase):
	def setUp(self):
		self.rng = np.random.default_rng(7)

	def test_softmax_symmetric(self):
		self.assertArrayClose(ops.softmax(tensor([0.0, 0.0])).values, [0.5, 0.5])

	def test_matmul_identity(self):
		a = self.rng.normal(size=(2, 2))
		self.assertArrayClose(ops.matmul(tensor(np.eye(2)), tensor(a)).values, a)

	def test_layer_norm_constant(self):
		self.assertArrayClose(ops.layer_norm(tensor([1.0, 1.0, 1.0])).values, [0.0, 0.0, 0.0])

	def test_softmax_rows(self):
		x = self.rng.normal(size=(5, 7)) * 10
		s = ops.softmax(tensor(x)).values
		self.assertArrayClose(s.sum(axis=-1), np.ones(5), atol=1e-12)

	def test_log_softmax_consistent(self):
		x = self.rng.normal(size=(4, 6)) * 3
		log_s = ops.log_softmax(tensor(x)).values
		s = ops.softmax(tensor(x)).values
		self.assertArrayClose(log_s, np.log(s), atol=1e-10)

	def test_gelu_values(self):
		out = ops.gelu(tensor([0.0, 10.0, -10.0])).values
		self.assertArrayClose(out, [0.0, 10.0, 0.0], atol=1e-8)

	def test_embed_lookup_rows(self):
		weight = self.rng.normal(size=(5, 3))
		out = ops.embed_lookup(tensor(weight), [4, 0, 4]).values
		self.assertArrayEqual(out, weight[[4, 0, 4]])

	def test_slice_concat(self):
		x = self.rng.normal(size=(3, 8))
		parts = [ops.slice_(tensor(x), i * 2, i * 2 + 2) for i in range(4)]
		self.assertArrayEqual(ops.concat(parts).values, x)

	def test_dropout_eval_identity(self):
		x = self.rng.normal(size=(3, 4))
		self.assertArrayEqual(ops.dropout(tensor(x), 0.5, training=False).values, x)

	def test_dropout_deterministic(self):
		x = self.rng.normal(size=(6, 6))
		first = ops.dropout(tensor(x), 0.3, training=True, rng=np.random.default_rng(3)).values
		second = ops.dropout(tensor(x), 0.3, training=True, rng=np.random.default_rng(3)).values
		self.assertArrayEqual(first, second)

	def test_dropout_needs_rng(self):
		with self.assertRaises(ValueError):
			ops.dropout(tensor([1.0, 2.0]), 0.5, training=True)

	def test_operators(self):
		a = tensor([1.0, 2.0])
		b = tensor([3.0, 5.0])
		self.assertArrayClose((a + b).values, [4.0, 7.0])
		self.assertArrayClose((b - a).values, [2.0, 3.0])
		self.assertArrayClose((a * b).values, [3.0, 10.0])
		self.assertArrayClose((2 * a).values, [2.0, 4.0])
		self.assertArrayClose((-a).values, [-1.0, -2.0])


class ErrorTest(SimpleTestCase):
	def test_matmul_shapes(self):
		with self.assertRaises(ShapeError) as ctx:
			ops.matmul(tensor(np.zeros((2, 3))), tensor(np.zeros((2, 3))))
		self.assertIn("(2, 3)", str(ctx.exception))

	def test_add_shapes(self):
		with self.assertRaises(ShapeError):
			ops.add(tensor(np.zeros((2, 3))), tensor(np.zeros((4,))))

	def test_rank_limit(self):
		with self.assertRaises(ShapeError):
			tensor(np.zeros((1, 1, 1, 1)))

	def test_embed_out_of_range(self):
		with self.assertRaises(TensorIndexError):
			ops.embed_lookup(tensor(np.zeros((3, 2))), [3])

	def test_unknown_primitive(self):
		with self.assertRaises(ValueError):
			apply_primitive('conv', [tensor([1.0])])

	def test_non_scalar_backward(self):
		x = tensor([1.0, 2.0], requires_grad=True)
		with self.assertRaises(GraphError):
			ops.scale(x, 2.0).backward()

	def test_debug_non_finite(self):
		previous = is_debug()
		set_debug(True)
		try:
			with self.assertRaises(NonFiniteError):
				ops.add(tensor([float('nan')]), tensor([1.0]))
		finally:
			set_debug(previous)

	def test_debug_allows_negative_infinity(self):
		previous = is_debug()
		set_debug(True)
		try:
			out = ops.add(tensor([float('-inf')]), tensor([1.0]))
			self.assertEqual(out.item(), float('-inf'))
			with self.assertRaises(NonFiniteError):
				ops.add(tensor([float('inf')]), tensor([1.0]))
		finally:
			set_debug(previous)

	def test_non_finite_passes_without_debug(self):
		previous = is_debug()
		set_debug(False)
		try:
			out = ops.add(tensor([float('inf')]), tensor([1.0]))
			self.assertTrue(math.isinf(out.item()))
		finally:
			set_debug(previous)


class BackwardTest(ArrayAssertMixin, SimpleTestCase):
	def test_sum(self):
		x = tensor([1.0, -2.0, 3.0], requires_grad=True)
		ops.sum_(x).backward()
		self.assertArrayEqual(x.grad, [1.0, 1.0, 1.0])

	def test_square(self):
		x = tensor([2.0], requires_grad=True)
		ops.sum_(x * x).backward()
		self.assertArrayClose(x.grad, [4.0])

	def test_accumulates(self):
		x = tensor([2.0], requires_grad=True)
		ops.sum_(x * x).backward()
		ops.sum_(x * x).backward()
		self.assertArrayClose(x.grad, [8.0])
		x.zero_grad()
		self.assertIsNone(x.grad)

	def test_shared_subgraph(self):
		x = tensor([3.0], requires_grad=True)
		y = x * x
		ops.sum_(y + y * x).backward()
		# d/dx (x^2 + x^3) = 2x + 3x^2
		self.assertArrayClose(x.grad, [6.0 + 27.0])

	def test_broadcast_bias(self):
		x = tensor(np.ones((4, 3)))
		b = tensor([0.0, 0.0, 0.0], requires_grad=True)
		ops.sum_(ops.add(x, b)).backward()
		self.assertArrayEqual(b.grad, [4.0, 4.0, 4.0])

	def test_constant_inputs(self):
		x = tensor([1.0, 2.0])
		out = ops.sum_(x * x)
		self.assertFalse(out.requires_grad)
		out.backward()
		self.assertIsNone(x.grad)

	def test_embed_repeated_ids(self):
		weight = tensor(np.zeros((3, 2)), requires_grad=True)
		ops.sum_(ops.embed_lookup(weight, [1, 1, 2])).backward()
		self.assertArrayEqual(weight.grad, [[0.0, 0.0], [2.0, 2.0], [1.0, 1.0]])


class GradCheckTest(GradCheckMixin, SimpleTestCase):
	def setUp(self):
		self.rng = np.random.default_rng(2024)

	def random(self, *shape):
		return self.rng.normal(size=shape)

	def test_sum_exact(self):
		error = grad_check(ops.sum_, tensor(self.random(3, 4)))
		self.assertLess(error, 1e-9)

	def test_matmul(self):
		a = self.random(3, 4)
		b = self.random(4, 2)
		w = self.random(3, 2)
		self.assertGradCheck(lambda x: weighted_sum(ops.matmul(x, tensor(b)), w), a)
		self.assertGradCheck(lambda x: weighted_sum(ops.matmul(tensor(a), x), w), b)

	def test_batched_matmul(self):
		a = self.random(2, 3, 4)
		b = self.random(4, 5)
		w = self.random(2, 3, 5)
		self.assertGradCheck(lambda x: weighted_sum(ops.matmul(tensor(a), x), w), b)

	def test_add_mul_broadcast(self):
		a = self.random(3, 4)
		b = self.random(4)
		w = self.random(3, 4)
		self.assertGradCheck(lambda x: weighted_sum(ops.add(tensor(a), x), w), b)
		self.assertGradCheck(lambda x: weighted_sum(ops.mul(tensor(a), x), w), b)
		self.assertGradCheck(lambda x: weighted_sum(ops.mul(x, tensor(b)), w), a)

	def test_elementwise(self):
		x = self.random(3, 5)
		w = self.random(3, 5)
		for fn in (ops.relu, ops.gelu, lambda t: ops.scale(t, -1.5)):
			self.assertGradCheck(lambda t: weighted_sum(fn(t), w), x)

	def test_normalizers(self):
		x = self.random(4, 6)
		w = self.random(4, 6)
		for fn in (ops.softmax, ops.log_softmax, ops.layer_norm):
			self.assertGradCheck(lambda t: weighted_sum(fn(t), w), x)

	def test_log_softmax_pick(self):
		x = self.random(1, 9)
		error = grad_check(lambda t: ops.slice_(ops.log_softmax(t), 4, 5), x)
		self.assertLess(error, 1e-6)

	def test_embed_lookup(self):
		weight = self.random(5, 3)
		w = self.random(4, 3)
		self.assertGradCheck(lambda t: weighted_sum(ops.embed_lookup(t, [0, 3, 3, 1]), w), weight)

	def test_structural(self):
		x = self.random(3, 6)
		w_cat = self.random(3, 9)
		w_slice = self.random(3, 2)
		w_t = self.random(6, 3)
		w_sum = self.random(6)
		y = tensor(self.random(3, 3))
		self.assertGradCheck(lambda t: weighted_sum(ops.concat([t, y]), w_cat), x)
		self.assertGradCheck(lambda t: weighted_sum(ops.slice_(t, 2, 4), w_slice), x)
		self.assertGradCheck(lambda t: weighted_sum(ops.transpose(t), w_t), x)
		self.assertGradCheck(lambda t: weighted_sum(ops.sum_(t, axis=0), w_sum), x)

	def test_dropout_fixed_mask(self):
		x = self.random(4, 4)
		w = self.random(4, 4)
		mask = self.rng.random((4, 4)) >= 0.5
		self.assertGradCheck(lambda t: weighted_sum(ops.dropout(t, 0.5, training=True, mask=mask), w), x)

	def test_two_layer_mlp(self):
		w1 = tensor(self.random(5, 8) * 0.5)
		b1 = tensor(self.random(8) * 0.1)
		w2 = tensor(self.random(8, 3) * 0.5)
		c = self.random(4, 3)

		def mlp(t):
			hidden = ops.gelu(ops.linear(t, w1, b1))
			return weighted_sum(ops.matmul(hidden, w2), c)

		self.assertGradCheck(mlp, self.random(4, 5))

	def test_attention_block(self):
		d = 6
		wq = tensor(self.random(d, d) * 0.4)
		wk = tensor(self.random(d, d) * 0.4)
		wv = tensor(self.random(d, d) * 0.4)
		c = self.random(5, d)

		def attention(t):
			normed = ops.layer_norm(t)
			q = ops.matmul(normed, wq)
			k = ops.matmul(normed, wk)
			v = ops.matmul(normed, wv)
			weights = ops.softmax(ops.scale(ops.matmul(q, ops.transpose(k)), 1.0 / math.sqrt(d)))
			return weighted_sum(ops.add(t, ops.matmul(weights, v)), c)

		self.assertGradCheck(attention, self.random(5, d), min_magnitude=1e-7)

	def test_all_kinds_registered(self):
		expected = {
			'matmul', 'add', 'mul', 'relu', 'gelu', 'softmax_lastdim', 'log_softmax_lastdim',
			'layer_norm_lastdim', 'embed_lookup', 'concat', 'slice', 'scale', 'transpose', 'dropout', 'sum',
		}
		self.assertTrue(expected.issubset(set(PRIMITIVES.keys())))


class DeterminismTest(ArrayAssertMixin, SimpleTestCase):
	def run_once(self):
		rng = np.random.default_rng(99)
		x = tensor(rng.normal(size=(4, 4)), requires_grad=True)
		w = tensor(rng.normal(size=(4, 4)))
		out = ops.dropout(ops.gelu(ops.matmul(x, w)), 0.2, training=True, rng=rng)
		loss = ops.sum_(ops.log_softmax(out))
		loss.backward()
		return loss.values, x.grad

	def test_bit_identical(self):
		first_loss, first_grad = self.run_once()
		second_loss, second_grad = self.run_once()
		self.assertArrayEqual(first_loss, second_loss)
		self.assertArrayEqual(first_grad, second_grad)
