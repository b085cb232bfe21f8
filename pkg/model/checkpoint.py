# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from collections import OrderedDict

import numpy as np

from .exceptions import CheckpointError
from .networks import ModelBundle, ModelConfig
from common_utils import logger
from common_utils.container import write_container, read_container
from vocab.vocabulary import Vocabulary


def bundle_arrays(bundle):
	return OrderedDict((name, value.values) for name, value in bundle.named_parameters())


def load_arrays(bundle, arrays, path):
	expected = bundle.named_parameters()
	names = set(name for name, __ in expected)
	for name in arrays:
		if name not in names:
			raise CheckpointError(path, "unexpected array %s" % name, array=name)
	for name, value in expected:
		if name not in arrays:
			raise CheckpointError(path, "array %s is missing" % name, array=name)
		array = arrays[name]
		if array.shape != value.shape:
			raise CheckpointError(path, "array %s has shape %s, model expects %s" % (name, array.shape, value.shape), array=name)
		if not np.all(np.isfinite(array)):
			raise CheckpointError(path, "array %s contains non-finite values" % name, array=name)
		value.values = array.copy()
		value.zero_grad()


def save_checkpoint(bundle, path, meta=None):
	extra = {
		'config': bundle.config.to_dict(),
		'vocabs': {'char': bundle.char_vocab.to_dict(), 'pinyin': bundle.pinyin_vocab.to_dict()},
		'meta': meta or {},
	}
	write_container(path, bundle_arrays(bundle), extra)


def bundle_from_header(header, path):
	try:
		config = ModelConfig.from_dict(header['config'])
		char_vocab = Vocabulary.from_dict(header['vocabs']['char'])
		pinyin_vocab = Vocabulary.from_dict(header['vocabs']['pinyin'])
	except (KeyError, TypeError) as e:
		raise CheckpointError(path, "incomplete header (%s)" % e)
	return ModelBundle(config, char_vocab, pinyin_vocab)


def load_checkpoint(path):
	header, arrays = read_container(path)
	bundle = bundle_from_header(header, path)
	load_arrays(bundle, arrays, path)
	bundle.meta = header.get('meta', {})
	return bundle


def read_meta(path):
	header, __ = read_container(path)
	return header.get('meta', {})


def select_top(paths, k, key='val_accuracy'):
	scored = []
	for order, path in enumerate(paths):
		value = read_meta(path).get(key)
		scored.append((-(value if value is not None else -np.inf), order, path))
	scored.sort()
	return [path for __, __, path in scored[:k]]


def average_checkpoints(paths, k):
	"""
	Priemer parametrov k checkpointov s najvyššou validačnou presnosťou.
	"""
	paths = list(paths)
	if not paths:
		raise CheckpointError('-', "no checkpoints to average")
	if k < 1:
		raise CheckpointError('-', "k must be at least 1")
	if k > len(paths):
		logger.warning("requested %d checkpoints, only %d available", k, len(paths))
	selected = select_top(paths, k)
	bundle = load_checkpoint(selected[0])
	totals = bundle_arrays(bundle)
	totals = OrderedDict((name, array.copy()) for name, array in totals.items())
	for path in selected[1:]:
		__, arrays = read_container(path)
		for name, total in totals.items():
			if name not in arrays:
				raise CheckpointError(path, "array %s is missing" % name, array=name)
			if arrays[name].shape != total.shape:
				raise CheckpointError(path, "array %s has shape %s, expected %s" % (name, arrays[name].shape, total.shape), array=name)
			total += arrays[name]
	for name, value in bundle.named_parameters():
		value.values = totals[name] / len(selected)
	bundle.meta = {'averaged': selected}
	logger.info("averaged %d checkpoints: %s", len(selected), ', '.join(selected))
	return bundle
