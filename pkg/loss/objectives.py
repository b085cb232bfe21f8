# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import numpy as np

from .exceptions import LossError, EmptyMaskError
from common_utils import logger
from tensor import ops
from tensor.core import Tensor, as_tensor
from tensor.exceptions import ShapeError
from tensor.primitives import Primitive, register, apply_primitive


SMOOTHING_CONVENTIONAL = 'conventional'
SMOOTHING_EMBEDDING = 'embedding'
SMOOTHING_MODES = (SMOOTHING_CONVENTIONAL, SMOOTHING_EMBEDDING)


class LossConfig(object):
	def __init__(self, alpha=0.3, beta=1e-4, smoothing=SMOOTHING_CONVENTIONAL, epsilon=0.1):
		if not 0.0 <= alpha <= 1.0:
			raise LossError("alpha must be in [0, 1], got %r" % alpha)
		if beta < 0.0:
			raise LossError("beta must be non-negative, got %r" % beta)
		if smoothing not in SMOOTHING_MODES:
			raise LossError("unknown smoothing mode %r" % smoothing)
		if not 0.0 < epsilon < 1.0:
			raise LossError("epsilon must be in (0, 1), got %r" % epsilon)
		self.alpha = float(alpha)
		self.beta = float(beta)
		self.smoothing = smoothing
		self.epsilon = float(epsilon)

	def to_dict(self):
		return {'alpha': self.alpha, 'beta': self.beta, 'smoothing': self.smoothing, 'epsilon': self.epsilon}


class ConventionalSmoothing(object):
	"""
	Hmotnosť 1 - ε na cieľ, zvyšok rovnomerne na ostatné tokeny okrem
	tých z `excluded` (maska, blank), ktoré dekodér nikdy nevydá.
	"""

	def __init__(self, epsilon, vocab_size, excluded=()):
		self.epsilon = epsilon
		self.vocab_size = vocab_size
		self.support = np.ones(vocab_size, dtype=bool)
		self.support[list(excluded)] = False

	def __call__(self, target):
		support = self.support.copy()
		support[target] = False
		count = int(support.sum())
		q = np.zeros(self.vocab_size)
		if count == 0:
			q[target] = 1.0
			return q
		q[support] = self.epsilon / count
		q[target] = 1.0 - self.epsilon
		return q


def one_hot(target, vocab_size):
	q = np.zeros(vocab_size)
	q[target] = 1.0
	return q


def target_matrix(targets, mask_positions, vocab_size, smooth=None):
	q = np.zeros((len(targets), vocab_size))
	for pos in mask_positions:
		target = int(targets[pos])
		if target < 0 or target >= vocab_size:
			raise LossError("target id %d out of range at position %d" % (target, pos))
		q[pos] = one_hot(target, vocab_size) if smooth is None else smooth(target)
	return q


def masked_ce(logits, targets, mask_positions, smooth=None):
	mask_positions = list(mask_positions)
	if not mask_positions:
		raise EmptyMaskError("masked cross-entropy needs at least one masked position")
	logits = as_tensor(logits)
	if logits.ndim != 2 or logits.shape[0] != len(targets):
		raise ShapeError("logits of shape %s do not match %d targets" % (logits.shape, len(targets)))
	q = target_matrix(targets, mask_positions, logits.shape[1], smooth)
	picked = ops.sum_(ops.mul(ops.log_softmax(logits), q))
	return ops.scale(picked, -1.0 / len(mask_positions))


def masked_accuracy(logits, targets, mask_positions):
	mask_positions = list(mask_positions)
	if not mask_positions:
		return 0, 0
	values = logits.values if isinstance(logits, Tensor) else np.asarray(logits)
	predicted = np.argmax(values[mask_positions], axis=-1)
	expected = np.asarray([targets[pos] for pos in mask_positions])
	return int(np.sum(predicted == expected)), len(mask_positions)


def _column_cosines(a, b):
	norm_a = np.linalg.norm(a, axis=0)
	norm_b = np.linalg.norm(b, axis=0)
	valid = (norm_a > 0) & (norm_b > 0)
	safe = np.where(valid, norm_a * norm_b, 1.0)
	cos = np.where(valid, np.sum(a * b, axis=0) / safe, 0.0)
	return cos, norm_a, norm_b, valid


@register
class MatRegPrimitive(Primitive):
	kind = 'matreg'
	arity = 2

	def check(self, arrays, attrs):
		super(MatRegPrimitive, self).check(arrays, attrs)
		a, b = arrays
		if a.ndim != 2 or a.shape != b.shape:
			raise ShapeError("matreg needs two matrices of equal shape, got %s and %s" % (a.shape, b.shape))

	def forward(self, ctx, a, b):
		cos, norm_a, norm_b, valid = _column_cosines(a, b)
		if not np.all(valid):
			logger.warning("matreg: %d zero-norm columns scored as cos=0", int(np.sum(~valid)))
		ctx.update(a=a, b=b, cos=cos, norm_a=norm_a, norm_b=norm_b, valid=valid)
		return np.asarray(np.mean(1.0 - cos))

	def backward(self, ctx, grad):
		a = ctx['a']
		b = ctx['b']
		cos = ctx['cos']
		valid = ctx['valid']
		norm_a = np.where(valid, ctx['norm_a'], 1.0)
		norm_b = np.where(valid, ctx['norm_b'], 1.0)
		factor = -float(grad) / a.shape[1]
		grad_a = b / (norm_a * norm_b) - cos * a / norm_a ** 2
		grad_b = a / (norm_a * norm_b) - cos * b / norm_b ** 2
		grad_a = np.where(valid, grad_a, 0.0) * factor
		grad_b = np.where(valid, grad_b, 0.0) * factor
		return grad_a, grad_b


def matreg_loss(w_a, w_b):
	return apply_primitive('matreg', [w_a, w_b])


def combined_loss(ctc_nll, p2m_nll, cmlm_nll, matreg, cfg):
	"""
	α·CTC + (1 - α)·(P2M + CMLM) + β·MatReg. Chýbajúce členy (None) sa
	vynechajú.
	"""
	weighted = (
		(ctc_nll, cfg.alpha),
		(p2m_nll, 1.0 - cfg.alpha),
		(cmlm_nll, 1.0 - cfg.alpha),
		(matreg, cfg.beta),
	)
	total = None
	for term, weight in weighted:
		if term is None:
			continue
		term = ops.scale(as_tensor(term), weight)
		total = term if total is None else ops.add(total, term)
	if total is None:
		raise LossError("combined loss has no terms")
	return total
