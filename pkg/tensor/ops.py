# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from .primitives import apply_primitive


def matmul(a, b):
	return apply_primitive('matmul', [a, b])


def add(a, b):
	return apply_primitive('add', [a, b])


def mul(a, b):
	return apply_primitive('mul', [a, b])


def scale(x, factor):
	return apply_primitive('scale', [x], factor=float(factor))


def relu(x):
	return apply_primitive('relu', [x])


def gelu(x):
	return apply_primitive('gelu', [x])


def softmax(x):
	return apply_primitive('softmax_lastdim', [x])


def log_softmax(x):
	return apply_primitive('log_softmax_lastdim', [x])


def layer_norm(x):
	return apply_primitive('layer_norm_lastdim', [x])


def embed_lookup(weight, ids):
	return apply_primitive('embed_lookup', [weight], ids=ids)


def concat(tensors, axis=-1):
	return apply_primitive('concat', list(tensors), axis=axis)


def slice_(x, start, stop, axis=-1):
	return apply_primitive('slice', [x], axis=axis, start=start, stop=stop)


def transpose(x):
	return apply_primitive('transpose', [x])


def dropout(x, rate, training=False, rng=None, mask=None):
	return apply_primitive('dropout', [x], rate=rate, training=training, rng=rng, mask=mask)


def sum_(x, axis=None):
	return apply_primitive('sum', [x], axis=axis)


def mean(x):
	return scale(sum_(x), 1.0 / x.size)


def linear(x, weight, bias=None):
	out = matmul(x, weight)
	if bias is not None:
		out = add(out, bias)
	return out
