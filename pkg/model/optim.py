# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import math

import numpy as np


class NoamSchedule(object):
	"""
	Lineárny warmup a potom pokles s inverznou odmocninou kroku.
	"""

	def __init__(self, model_dim, warmup_steps=400, factor=1.0):
		self.model_dim = model_dim
		self.warmup_steps = max(1, int(warmup_steps))
		self.factor = factor

	def __call__(self, step):
		step = max(1, step)
		return self.factor * self.model_dim ** -0.5 * min(step ** -0.5, step * self.warmup_steps ** -1.5)


class ConstantSchedule(object):
	def __init__(self, lr):
		self.lr = lr

	def __call__(self, step):
		return self.lr


class Adam(object):
	def __init__(self, params, schedule, beta1=0.9, beta2=0.98, eps=1e-9):
		self.params = list(params)
		self.schedule = schedule
		self.beta1 = beta1
		self.beta2 = beta2
		self.eps = eps
		self.step_count = 0
		self.first = [np.zeros_like(p.values) for p in self.params]
		self.second = [np.zeros_like(p.values) for p in self.params]

	@property
	def lr(self):
		return self.schedule(max(1, self.step_count))

	def zero_grad(self):
		for param in self.params:
			param.zero_grad()

	def step(self):
		self.step_count += 1
		lr = self.schedule(self.step_count)
		correction1 = 1.0 - self.beta1 ** self.step_count
		correction2 = 1.0 - self.beta2 ** self.step_count
		for idx, param in enumerate(self.params):
			if param.grad is None:
				continue
			grad = param.grad
			self.first[idx] = self.beta1 * self.first[idx] + (1.0 - self.beta1) * grad
			self.second[idx] = self.beta2 * self.second[idx] + (1.0 - self.beta2) * grad * grad
			update = (self.first[idx] / correction1) / (np.sqrt(self.second[idx] / correction2) + self.eps)
			param.values = param.values - lr * update
		return lr


def grad_norm(params):
	total = 0.0
	for param in params:
		if param.grad is not None:
			total += float(np.sum(param.grad * param.grad))
	return math.sqrt(total)


def clip_grad_norm(params, max_norm):
	norm = grad_norm(params)
	if max_norm and norm > max_norm:
		factor = max_norm / (norm + 1e-12)
		for param in params:
			if param.grad is not None:
				param.grad = param.grad * factor
	return norm


def scale_grads(params, factor):
	for param in params:
		if param.grad is not None:
			param.grad = param.grad * factor
