# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import numpy as np

from .exceptions import LossError, CTCInfeasibleError, CTCNumericError
from tensor.exceptions import ShapeError
from tensor.primitives import Primitive, register, apply_primitive


NEG_INF = -np.inf


def required_frames(target):
	repeats = sum(1 for prev, cur in zip(target, target[1:]) if prev == cur)
	return len(target) + repeats


def extend_target(target, blank):
	extended = [blank]
	for label in target:
		extended.append(label)
		extended.append(blank)
	return np.asarray(extended, dtype=np.int64)


def _skip_allowed(extended, blank):
	skip = np.zeros(len(extended), dtype=bool)
	for s in range(2, len(extended)):
		skip[s] = extended[s] != blank and extended[s] != extended[s - 2]
	return skip


def _shift(row, by):
	shifted = np.full_like(row, NEG_INF)
	if by < len(row):
		shifted[by:] = row[:len(row) - by]
	return shifted


def _unshift(row, by):
	shifted = np.full_like(row, NEG_INF)
	if by < len(row):
		shifted[:len(row) - by] = row[by:]
	return shifted


def forward_variables(log_probs, extended, skip):
	frames = log_probs.shape[0]
	size = len(extended)
	emit = log_probs[:, extended]
	alpha = np.full((frames, size), NEG_INF)
	alpha[0, 0] = emit[0, 0]
	if size > 1:
		alpha[0, 1] = emit[0, 1]
	for t in range(1, frames):
		prev = alpha[t - 1]
		from_skip = np.where(skip, _shift(prev, 2), NEG_INF)
		alpha[t] = np.logaddexp(np.logaddexp(prev, _shift(prev, 1)), from_skip) + emit[t]
	return alpha


def backward_variables(log_probs, extended, skip):
	frames = log_probs.shape[0]
	size = len(extended)
	emit = log_probs[:, extended]
	# skip[s + 2] allows the transition s -> s + 2
	skip_from = _unshift(skip.astype(np.float64), 2) > 0
	beta = np.full((frames, size), NEG_INF)
	beta[-1, -1] = emit[-1, -1]
	if size > 1:
		beta[-1, -2] = emit[-1, -2]
	for t in range(frames - 2, -1, -1):
		nxt = beta[t + 1]
		from_skip = np.where(skip_from, _unshift(nxt, 2), NEG_INF)
		beta[t] = np.logaddexp(np.logaddexp(nxt, _unshift(nxt, 1)), from_skip) + emit[t]
	return beta


def ctc_forward_backward(log_probs, target, blank):
	"""
	Záporná log-vierohodnosť CTC a jej gradient podľa log-pravdepodobností.
	Gradient je záporná očakávaná obsadenosť symbolov v jednotlivých
	rámcoch.
	"""
	log_probs = np.asarray(log_probs, dtype=np.float64)
	target = [int(label) for label in target]
	if log_probs.ndim != 2:
		raise ShapeError("ctc expects frames x vocabulary log-probabilities, got shape %s" % (log_probs.shape,))
	frames, size = log_probs.shape
	if blank in target:
		raise LossError("ctc target contains the blank id %d" % blank)
	if any(label < 0 or label >= size for label in target):
		raise LossError("ctc target id out of range 0..%d" % (size - 1))
	required = required_frames(target)
	if frames == 0 or required > frames:
		raise CTCInfeasibleError(len(target), required, frames)

	extended = extend_target(target, blank)
	skip = _skip_allowed(extended, blank)
	alpha = forward_variables(log_probs, extended, skip)
	beta = backward_variables(log_probs, extended, skip)
	if len(extended) > 1:
		log_likelihood = np.logaddexp(alpha[-1, -1], alpha[-1, -2])
	else:
		log_likelihood = alpha[-1, -1]
	if not np.isfinite(log_likelihood):
		raise CTCNumericError("ctc log-likelihood is not finite (%r)" % log_likelihood)

	emit = log_probs[:, extended]
	occupancy = np.exp(alpha + beta - emit - log_likelihood)
	grad = np.zeros_like(log_probs)
	for s, label in enumerate(extended):
		grad[:, label] -= occupancy[:, s]
	grad[~np.isfinite(grad)] = 0.0
	return -float(log_likelihood), grad


@register
class CTCPrimitive(Primitive):
	kind = 'ctc'
	arity = 1

	def forward(self, ctx, log_probs, target=(), blank=0):
		nll, grad = ctc_forward_backward(log_probs, target, blank)
		ctx['grad'] = grad
		return np.asarray(nll)

	def backward(self, ctx, grad):
		return (ctx['grad'] * float(grad),)


def ctc_loss(log_probs, target, blank=0):
	return apply_primitive('ctc', [log_probs], target=list(target), blank=blank)
