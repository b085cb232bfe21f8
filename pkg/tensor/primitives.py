# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import math

import numpy as np

from .core import Tensor, as_tensor, check_finite, is_debug
from .exceptions import ShapeError, TensorIndexError


LAYER_NORM_EPS = 1e-5
GELU_C = math.sqrt(2.0 / math.pi)

PRIMITIVES = {}


def register(cls):
	PRIMITIVES[cls.kind] = cls()
	return cls


def unbroadcast(grad, shape):
	while grad.ndim > len(shape):
		grad = grad.sum(axis=0)
	for axis, size in enumerate(shape):
		if size == 1 and grad.shape[axis] != 1:
			grad = grad.sum(axis=axis, keepdims=True)
	return grad


def broadcast_shape(kind, a, b):
	try:
		return np.broadcast_shapes(a.shape, b.shape)
	except ValueError:
		raise ShapeError("%s: shapes %s and %s do not broadcast" % (kind, a.shape, b.shape))


class Primitive(object):
	kind = None
	arity = None

	def check(self, arrays, attrs):
		if self.arity is not None and len(arrays) != self.arity:
			raise ShapeError("%s expects %d inputs, got %d" % (self.kind, self.arity, len(arrays)))

	def forward(self, ctx, *arrays, **attrs):
		raise NotImplementedError()

	def backward(self, ctx, grad):
		raise NotImplementedError()


def apply_primitive(kind, inputs, **attrs):
	try:
		primitive = PRIMITIVES[kind]
	except KeyError:
		raise ValueError("unknown primitive %r" % kind)
	inputs = [as_tensor(value) for value in inputs]
	arrays = [t.values for t in inputs]
	primitive.check(arrays, attrs)
	if is_debug():
		check_finite(arrays, kind)
	ctx = {}
	out = primitive.forward(ctx, *arrays, **attrs)
	requires_grad = any(t.requires_grad for t in inputs)
	if not requires_grad:
		return Tensor(out)
	return Tensor(out, requires_grad=True, parents=tuple(inputs), primitive=primitive, ctx=ctx)


@register
class MatMul(Primitive):
	kind = 'matmul'
	arity = 2

	def check(self, arrays, attrs):
		super(MatMul, self).check(arrays, attrs)
		a, b = arrays
		if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
			raise ShapeError("matmul: shapes %s and %s are not aligned" % (a.shape, b.shape))

	def forward(self, ctx, a, b):
		ctx['a'] = a
		ctx['b'] = b
		return np.matmul(a, b)

	def backward(self, ctx, grad):
		a = ctx['a']
		b = ctx['b']
		grad_a = np.matmul(grad, np.swapaxes(b, -1, -2))
		grad_b = np.matmul(np.swapaxes(a, -1, -2), grad)
		return unbroadcast(grad_a, a.shape), unbroadcast(grad_b, b.shape)


@register
class Add(Primitive):
	kind = 'add'
	arity = 2

	def check(self, arrays, attrs):
		super(Add, self).check(arrays, attrs)
		broadcast_shape(self.kind, *arrays)

	def forward(self, ctx, a, b):
		ctx['shapes'] = (a.shape, b.shape)
		return a + b

	def backward(self, ctx, grad):
		shape_a, shape_b = ctx['shapes']
		return unbroadcast(grad, shape_a), unbroadcast(grad, shape_b)


@register
class Mul(Primitive):
	kind = 'mul'
	arity = 2

	def check(self, arrays, attrs):
		super(Mul, self).check(arrays, attrs)
		broadcast_shape(self.kind, *arrays)

	def forward(self, ctx, a, b):
		ctx['a'] = a
		ctx['b'] = b
		return a * b

	def backward(self, ctx, grad):
		a = ctx['a']
		b = ctx['b']
		return unbroadcast(grad * b, a.shape), unbroadcast(grad * a, b.shape)


@register
class Scale(Primitive):
	kind = 'scale'
	arity = 1

	def forward(self, ctx, x, factor=1.0):
		ctx['factor'] = factor
		return x * factor

	def backward(self, ctx, grad):
		return (grad * ctx['factor'],)


@register
class Relu(Primitive):
	kind = 'relu'
	arity = 1

	def forward(self, ctx, x):
		ctx['positive'] = x > 0
		return np.where(ctx['positive'], x, 0.0)

	def backward(self, ctx, grad):
		return (grad * ctx['positive'],)


@register
class Gelu(Primitive):
	kind = 'gelu'
	arity = 1

	def forward(self, ctx, x):
		inner = GELU_C * (x + 0.044715 * x ** 3)
		t = np.tanh(inner)
		ctx['x'] = x
		ctx['t'] = t
		return 0.5 * x * (1.0 + t)

	def backward(self, ctx, grad):
		x = ctx['x']
		t = ctx['t']
		d_inner = GELU_C * (1.0 + 3 * 0.044715 * x ** 2)
		return (grad * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t ** 2) * d_inner),)


@register
class SoftmaxLastdim(Primitive):
	kind = 'softmax_lastdim'
	arity = 1

	def forward(self, ctx, x):
		shifted = x - np.max(x, axis=-1, keepdims=True)
		e = np.exp(shifted)
		s = e / np.sum(e, axis=-1, keepdims=True)
		ctx['s'] = s
		return s

	def backward(self, ctx, grad):
		s = ctx['s']
		return (s * (grad - np.sum(grad * s, axis=-1, keepdims=True)),)


def log_softmax(x):
	shifted = x - np.max(x, axis=-1, keepdims=True)
	return shifted - np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))


@register
class LogSoftmaxLastdim(Primitive):
	kind = 'log_softmax_lastdim'
	arity = 1

	def forward(self, ctx, x):
		out = log_softmax(x)
		ctx['out'] = out
		return out

	def backward(self, ctx, grad):
		s = np.exp(ctx['out'])
		return (grad - s * np.sum(grad, axis=-1, keepdims=True),)


@register
class LayerNormLastdim(Primitive):
	kind = 'layer_norm_lastdim'
	arity = 1

	def forward(self, ctx, x, eps=LAYER_NORM_EPS):
		mean = np.mean(x, axis=-1, keepdims=True)
		centered = x - mean
		var = np.mean(centered ** 2, axis=-1, keepdims=True)
		inv_std = 1.0 / np.sqrt(var + eps)
		normalized = centered * inv_std
		ctx['normalized'] = normalized
		ctx['inv_std'] = inv_std
		return normalized

	def backward(self, ctx, grad):
		normalized = ctx['normalized']
		inv_std = ctx['inv_std']
		mean_grad = np.mean(grad, axis=-1, keepdims=True)
		mean_grad_norm = np.mean(grad * normalized, axis=-1, keepdims=True)
		return (inv_std * (grad - mean_grad - normalized * mean_grad_norm),)


@register
class EmbedLookup(Primitive):
	kind = 'embed_lookup'
	arity = 1

	def check(self, arrays, attrs):
		super(EmbedLookup, self).check(arrays, attrs)
		weight = arrays[0]
		ids = np.asarray(attrs.get('ids', ()), dtype=np.int64)
		if weight.ndim != 2:
			raise ShapeError("embed_lookup: weight must be a matrix, got shape %s" % (weight.shape,))
		if ids.size and (ids.min() < 0 or ids.max() >= weight.shape[0]):
			raise TensorIndexError("embed_lookup: id out of range 0..%d" % (weight.shape[0] - 1))

	def forward(self, ctx, weight, ids=()):
		ids = np.asarray(ids, dtype=np.int64).reshape(-1)
		ctx['ids'] = ids
		ctx['shape'] = weight.shape
		return weight[ids]

	def backward(self, ctx, grad):
		grad_weight = np.zeros(ctx['shape'])
		np.add.at(grad_weight, ctx['ids'], grad)
		return (grad_weight,)


@register
class Concat(Primitive):
	kind = 'concat'

	def check(self, arrays, attrs):
		axis = attrs.get('axis', -1)
		if not arrays:
			raise ShapeError("concat needs at least one input")
		reference = list(arrays[0].shape)
		for array in arrays[1:]:
			other = list(array.shape)
			if len(other) != len(reference):
				raise ShapeError("concat: shapes %s and %s differ in rank" % (arrays[0].shape, array.shape))
			ref_cut = list(reference)
			other_cut = list(other)
			del ref_cut[axis]
			del other_cut[axis]
			if ref_cut != other_cut:
				raise ShapeError("concat: shapes %s and %s do not match outside axis %d" % (arrays[0].shape, array.shape, axis))

	def forward(self, ctx, *arrays, **attrs):
		axis = attrs.get('axis', -1)
		ctx['axis'] = axis
		ctx['sizes'] = [array.shape[axis] for array in arrays]
		return np.concatenate(arrays, axis=axis)

	def backward(self, ctx, grad):
		bounds = np.cumsum(ctx['sizes'])[:-1]
		return tuple(np.split(grad, bounds, axis=ctx['axis']))


@register
class Slice(Primitive):
	kind = 'slice'
	arity = 1

	def check(self, arrays, attrs):
		super(Slice, self).check(arrays, attrs)
		x = arrays[0]
		axis = attrs.get('axis', -1)
		start = attrs.get('start', 0)
		stop = attrs.get('stop', x.shape[axis])
		if not 0 <= start <= stop <= x.shape[axis]:
			raise ShapeError("slice %d:%d out of bounds for shape %s" % (start, stop, x.shape))

	def forward(self, ctx, x, axis=-1, start=0, stop=None):
		if stop is None:
			stop = x.shape[axis]
		index = [slice(None)] * x.ndim
		index[axis] = slice(start, stop)
		ctx['index'] = tuple(index)
		ctx['shape'] = x.shape
		return x[ctx['index']].copy()

	def backward(self, ctx, grad):
		full = np.zeros(ctx['shape'])
		full[ctx['index']] = grad
		return (full,)


@register
class Transpose(Primitive):
	kind = 'transpose'
	arity = 1

	def check(self, arrays, attrs):
		super(Transpose, self).check(arrays, attrs)
		if arrays[0].ndim < 2:
			raise ShapeError("transpose needs rank >= 2, got shape %s" % (arrays[0].shape,))

	def forward(self, ctx, x):
		return np.swapaxes(x, -1, -2).copy()

	def backward(self, ctx, grad):
		return (np.swapaxes(grad, -1, -2).copy(),)


@register
class Dropout(Primitive):
	kind = 'dropout'
	arity = 1

	def check(self, arrays, attrs):
		super(Dropout, self).check(arrays, attrs)
		rate = attrs.get('rate', 0.0)
		if not 0.0 <= rate < 1.0:
			raise ValueError("dropout rate must be in [0, 1), got %r" % rate)
		if attrs.get('training') and rate > 0 and attrs.get('rng') is None and attrs.get('mask') is None:
			raise ValueError("dropout in training mode needs an explicit rng")

	def forward(self, ctx, x, rate=0.0, training=False, rng=None, mask=None):
		if not training or rate == 0.0:
			ctx['keep'] = None
			return x.copy()
		if mask is None:
			mask = rng.random(x.shape) >= rate
		keep = np.asarray(mask, dtype=np.float64) / (1.0 - rate)
		ctx['keep'] = keep
		return x * keep

	def backward(self, ctx, grad):
		if ctx['keep'] is None:
			return (grad,)
		return (grad * ctx['keep'],)


@register
class Sum(Primitive):
	kind = 'sum'
	arity = 1

	def forward(self, ctx, x, axis=None):
		ctx['shape'] = x.shape
		ctx['axis'] = axis
		return np.asarray(np.sum(x, axis=axis))

	def backward(self, ctx, grad):
		shape = ctx['shape']
		axis = ctx['axis']
		if axis is None:
			return (np.full(shape, float(grad)),)
		return (np.broadcast_to(np.expand_dims(grad, axis), shape).copy(),)
