# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import math
from collections import OrderedDict

import numpy as np

from tensor import ops
from tensor.core import tensor


def positional_encoding(length, dim):
	encoding = np.zeros((length, dim))
	if length == 0:
		return encoding
	position = np.arange(length)[:, None]
	div_term = np.exp(np.arange(0, dim, 2) * (-math.log(10000.0) / dim))
	encoding[:, 0::2] = np.sin(position * div_term)
	encoding[:, 1::2] = np.cos(position * div_term)[:, :dim // 2]
	return encoding


class Module(object):
	"""
	Strom parametrov. Mená parametrov sú bodkou oddelené cesty, poradie je
	poradie registrácie.
	"""

	def __init__(self):
		self._params = OrderedDict()
		self._children = OrderedDict()

	def param(self, name, values):
		value = tensor(values, requires_grad=True)
		self._params[name] = value
		return value

	def child(self, name, module):
		self._children[name] = module
		return module

	def named_parameters(self, prefix=''):
		result = []
		for name, value in self._params.items():
			result.append((prefix + name, value))
		for name, module in self._children.items():
			result.extend(module.named_parameters(prefix + name + '.'))
		return result

	def parameters(self):
		return [value for __, value in self.named_parameters()]

	def zero_grad(self):
		for value in self.parameters():
			value.zero_grad()


def init_matrix(rng, fan_in, fan_out):
	return rng.normal(scale=1.0 / math.sqrt(fan_in), size=(fan_in, fan_out))


class Linear(Module):
	def __init__(self, rng, fan_in, fan_out, bias=True):
		super(Linear, self).__init__()
		self.weight = self.param('weight', init_matrix(rng, fan_in, fan_out))
		self.bias = self.param('bias', np.zeros(fan_out)) if bias else None

	def __call__(self, x):
		return ops.linear(x, self.weight, self.bias)


class LayerNorm(Module):
	def __init__(self, dim):
		super(LayerNorm, self).__init__()
		self.gain = self.param('gain', np.ones(dim))
		self.bias = self.param('bias', np.zeros(dim))

	def __call__(self, x):
		return ops.add(ops.mul(ops.layer_norm(x), self.gain), self.bias)


class Dropout(object):
	def __init__(self, rate):
		self.rate = rate

	def __call__(self, x, rng=None):
		if rng is None or self.rate == 0.0:
			return x
		return ops.dropout(x, self.rate, training=True, rng=rng)


class MultiHeadAttention(Module):
	def __init__(self, rng, dim, num_heads):
		super(MultiHeadAttention, self).__init__()
		self.num_heads = num_heads
		self.head_dim = dim // num_heads
		self.query = self.child('query', Linear(rng, dim, dim))
		# softmax is invariant to a key bias
		self.key = self.child('key', Linear(rng, dim, dim, bias=False))
		self.value = self.child('value', Linear(rng, dim, dim))
		self.output = self.child('output', Linear(rng, dim, dim))

	def __call__(self, x, memory=None):
		memory = x if memory is None else memory
		q = self.query(x)
		k = self.key(memory)
		v = self.value(memory)
		heads = []
		scale = 1.0 / math.sqrt(self.head_dim)
		for head in range(self.num_heads):
			start = head * self.head_dim
			stop = start + self.head_dim
			q_h = ops.slice_(q, start, stop)
			k_h = ops.slice_(k, start, stop)
			v_h = ops.slice_(v, start, stop)
			weights = ops.softmax(ops.scale(ops.matmul(q_h, ops.transpose(k_h)), scale))
			heads.append(ops.matmul(weights, v_h))
		return self.output(ops.concat(heads))


class FeedForward(Module):
	def __init__(self, rng, dim, ff_dim):
		super(FeedForward, self).__init__()
		self.inner = self.child('inner', Linear(rng, dim, ff_dim))
		self.outer = self.child('outer', Linear(rng, ff_dim, dim))

	def __call__(self, x):
		return self.outer(ops.gelu(self.inner(x)))


class EncoderLayer(Module):
	def __init__(self, rng, dim, num_heads, ff_dim, dropout):
		super(EncoderLayer, self).__init__()
		self.attention_norm = self.child('attention_norm', LayerNorm(dim))
		self.attention = self.child('attention', MultiHeadAttention(rng, dim, num_heads))
		self.ff_norm = self.child('ff_norm', LayerNorm(dim))
		self.ff = self.child('ff', FeedForward(rng, dim, ff_dim))
		self.dropout = Dropout(dropout)

	def __call__(self, x, rng=None):
		x = ops.add(x, self.dropout(self.attention(self.attention_norm(x)), rng))
		return ops.add(x, self.dropout(self.ff(self.ff_norm(x)), rng))


class DecoderLayer(Module):
	"""
	Obojsmerná vrstva dekodéra: self-attention bez kauzálnej masky,
	cross-attention na výstup enkodéra a feed-forward blok.
	"""

	def __init__(self, rng, dim, num_heads, ff_dim, dropout):
		super(DecoderLayer, self).__init__()
		self.self_norm = self.child('self_norm', LayerNorm(dim))
		self.self_attention = self.child('self_attention', MultiHeadAttention(rng, dim, num_heads))
		self.cross_norm = self.child('cross_norm', LayerNorm(dim))
		self.cross_attention = self.child('cross_attention', MultiHeadAttention(rng, dim, num_heads))
		self.ff_norm = self.child('ff_norm', LayerNorm(dim))
		self.ff = self.child('ff', FeedForward(rng, dim, ff_dim))
		self.dropout = Dropout(dropout)

	def __call__(self, x, memory, rng=None):
		x = ops.add(x, self.dropout(self.self_attention(self.self_norm(x)), rng))
		x = ops.add(x, self.dropout(self.cross_attention(self.cross_norm(x), memory), rng))
		return ops.add(x, self.dropout(self.ff(self.ff_norm(x)), rng))
