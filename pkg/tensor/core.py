# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import numpy as np

from .exceptions import ShapeError, NonFiniteError, GraphError


MAX_RANK = 3

_state = {'debug': False}


def set_debug(enabled):
	_state['debug'] = bool(enabled)


def is_debug():
	return _state['debug']


class Tensor(object):
	"""
	Hustá float64 matica s gradientom. Uzly grafu vznikajú len cez
	apply_primitive; listy vytvára funkcia `tensor`.
	"""

	# numpy operands defer to the reflected operators below
	__array_ufunc__ = None

	def __init__(self, values, requires_grad=False, parents=(), primitive=None, ctx=None):
		values = np.asarray(values, dtype=np.float64)
		if values.ndim > MAX_RANK:
			raise ShapeError("rank %d tensors are not supported, shape %s" % (values.ndim, values.shape))
		self.values = values
		self.grad = None
		self.requires_grad = requires_grad
		self.parents = parents
		self.primitive = primitive
		self.ctx = ctx

	@property
	def shape(self):
		return self.values.shape

	@property
	def ndim(self):
		return self.values.ndim

	@property
	def size(self):
		return self.values.size

	@property
	def is_leaf(self):
		return self.primitive is None

	def item(self):
		return float(self.values.reshape(-1)[0])

	def numpy(self):
		return self.values

	def zero_grad(self):
		self.grad = None

	def backward(self):
		backward(self)

	def detach(self):
		return Tensor(self.values)

	def __repr__(self):
		return '<Tensor shape=%s%s>' % (self.shape, ' grad' if self.requires_grad else '')

	def __add__(self, other):
		from .ops import add
		return add(self, other)

	__radd__ = __add__

	def __sub__(self, other):
		from .ops import add, scale
		return add(self, scale(as_tensor(other), -1.0))

	def __neg__(self):
		from .ops import scale
		return scale(self, -1.0)

	def __mul__(self, other):
		from .ops import mul, scale
		if isinstance(other, (int, float)):
			return scale(self, float(other))
		return mul(self, other)

	__rmul__ = __mul__

	def __matmul__(self, other):
		from .ops import matmul
		return matmul(self, other)


def tensor(values, requires_grad=False):
	return Tensor(np.array(values, dtype=np.float64), requires_grad=requires_grad)


def as_tensor(value):
	if isinstance(value, Tensor):
		return value
	return Tensor(value)


def check_finite(arrays, kind):
	"""
	NaN a +inf sú chybou; -inf je platný logaritmus nulovej pravdepodobnosti.
	"""
	for idx, array in enumerate(arrays):
		if isinstance(array, np.ndarray) and (np.isnan(array).any() or np.isposinf(array).any()):
			raise NonFiniteError("non-finite value in input %d of %s" % (idx, kind))


def _topological_order(root):
	order = []
	visited = set()
	stack = [(root, False)]
	while stack:
		node, expanded = stack.pop()
		if expanded:
			order.append(node)
			continue
		if id(node) in visited:
			continue
		visited.add(id(node))
		stack.append((node, True))
		for parent in node.parents:
			if parent.requires_grad and id(parent) not in visited:
				stack.append((parent, False))
	return order


def backward(loss):
	if loss.size != 1:
		raise GraphError("backward needs a scalar loss, got shape %s" % (loss.shape,))
	if not loss.requires_grad:
		return
	grads = {id(loss): np.ones_like(loss.values)}
	for node in reversed(_topological_order(loss)):
		grad = grads.pop(id(node), None)
		if grad is None:
			continue
		if node.is_leaf:
			if node.grad is None:
				node.grad = grad.copy()
			else:
				node.grad = node.grad + grad
			continue
		parent_grads = node.primitive.backward(node.ctx, grad)
		for parent, parent_grad in zip(node.parents, parent_grads):
			if parent_grad is None or not parent.requires_grad:
				continue
			if parent_grad.shape != parent.shape:
				raise ShapeError("%s produced gradient of shape %s for input of shape %s" % (node.primitive.kind, parent_grad.shape, parent.shape))
			if id(parent) in grads:
				grads[id(parent)] = grads[id(parent)] + parent_grad
			else:
				grads[id(parent)] = parent_grad
