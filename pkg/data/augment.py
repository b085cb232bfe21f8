# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import numpy as np

from .exceptions import CorpusConfigError


class AugmentConfig(object):
	def __init__(self, num_time_masks=2, time_width=5, num_freq_masks=2, freq_width=2):
		for name, value in (('num_time_masks', num_time_masks), ('time_width', time_width), ('num_freq_masks', num_freq_masks), ('freq_width', freq_width)):
			if int(value) < 0:
				raise CorpusConfigError("%s must not be negative" % name, {name: "must not be negative"})
		self.num_time_masks = int(num_time_masks)
		self.time_width = int(time_width)
		self.num_freq_masks = int(num_freq_masks)
		self.freq_width = int(freq_width)

	@property
	def enabled(self):
		return (self.num_time_masks and self.time_width) or (self.num_freq_masks and self.freq_width)

	def to_dict(self):
		return {
			'num_time_masks': self.num_time_masks,
			'time_width': self.time_width,
			'num_freq_masks': self.num_freq_masks,
			'freq_width': self.freq_width,
		}


def _mask_band(out, axis, count, width, rng):
	size = out.shape[axis]
	width = min(width, size)
	if width <= 0:
		return
	for __ in range(count):
		start = int(rng.integers(0, size - width + 1))
		if axis == 0:
			out[start:start + width, :] = 0.0
		else:
			out[:, start:start + width] = 0.0


def spec_augment(features, num_time_masks, time_width, num_freq_masks, freq_width, rng):
	"""
	Vynuluje náhodné pásy rámcov a príznakov. Vstup sa nemení, šírky sa
	orežú na rozmer matice.
	"""
	out = np.array(features, dtype=np.float64, copy=True)
	if out.ndim != 2:
		raise CorpusConfigError("spec_augment needs a frames x features matrix, got shape %s" % (out.shape,))
	_mask_band(out, 0, num_time_masks, time_width, rng)
	_mask_band(out, 1, num_freq_masks, freq_width, rng)
	return out


def augment(features, cfg, rng):
	return spec_augment(features, cfg.num_time_masks, cfg.time_width, cfg.num_freq_masks, cfg.freq_width, rng)
