# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io
import os

import numpy as np
from django.test import SimpleTestCase

from .checkpoint import save_checkpoint, load_checkpoint, average_checkpoints, bundle_arrays
from .exceptions import CheckpointError
from .networks import EncoderConfig, ModelConfig, ModelBundle, MASK_CTC, MASK_CTC_P2M, MASK_CTC_M2M, CTC_ONLY
from .optim import Adam, NoamSchedule, ConstantSchedule, clip_grad_norm, grad_norm
from common_utils.container import write_container, read_container
from common_utils.exceptions import ConfigError, CompatibilityError, ContainerError
from common_utils.tests_common import TemporaryDirectoryMixin, ArrayAssertMixin
from loss.ctc import ctc_loss
from loss.masking import apply_mask
from loss.objectives import masked_ce
from tensor import ops
from tensor.core import tensor
from tensor.exceptions import ShapeError, TensorIndexError
from tensor.gradcheck import parameter_grad_check
from vocab.pinyin import PinyinTable
from vocab.vocabulary import build_vocab


TABLE = PinyinTable([("我", "wo"), ("很", "hen"), ("狠", "hen"), ("好", "hao")])
CORPUS = ["我很happy", "狠好 day"]


def tiny_config(architecture=MASK_CTC_P2M, **kwargs):
	encoder = EncoderConfig(input_dim=3, model_dim=8, num_layers=1, num_heads=2, ff_dim=16, subsample_factor=4, dropout=0.0)
	kwargs.setdefault('num_cmlm_layers', 1)
	kwargs.setdefault('seed', 5)
	return ModelConfig(architecture, encoder, **kwargs)


def tiny_bundle(architecture=MASK_CTC_P2M, **kwargs):
	char_vocab, pinyin_vocab = build_vocab(CORPUS, TABLE)
	return ModelBundle(tiny_config(architecture, **kwargs), char_vocab, pinyin_vocab)


def features(frames, seed=0):
	return np.random.default_rng(seed).normal(size=(frames, 3))


class EncoderTest(ArrayAssertMixin, SimpleTestCase):
	def setUp(self):
		self.bundle = tiny_bundle()

	def test_length_law(self):
		for frames in range(4, 30):
			hidden, log_probs = self.bundle.encoder_forward(features(frames))
			steps = -(-frames // 4)
			self.assertEqual(hidden.shape, (steps, 8))
			self.assertEqual(log_probs.shape, (steps, len(self.bundle.pinyin_vocab)))

	def test_forty_frames(self):
		hidden, __ = self.bundle.encoder_forward(features(40))
		self.assertEqual(hidden.shape[0], 10)

	def test_normalized(self):
		__, log_probs = self.bundle.encoder_forward(features(23) * 5.0)
		self.assertArrayClose(np.exp(log_probs.values).sum(axis=1), np.ones(6), atol=1e-8)

	def test_reproducible(self):
		first, __ = tiny_bundle().encoder_forward(np.zeros((16, 3)))
		second, __ = tiny_bundle().encoder_forward(np.zeros((16, 3)))
		self.assertArrayEqual(first.values, second.values)

	def test_feature_dim(self):
		with self.assertRaises(ShapeError):
			self.bundle.encoder_forward(np.zeros((16, 4)))

	def test_ctc_vocab(self):
		self.assertEqual(tiny_bundle(MASK_CTC).encoder.ctc.weight.shape, (8, len(self.bundle.char_vocab)))
		self.assertEqual(self.bundle.w_ctc.shape, (8, len(self.bundle.pinyin_vocab)))


class DecoderTest(ArrayAssertMixin, SimpleTestCase):
	def setUp(self):
		self.bundle = tiny_bundle()
		self.hidden, __ = self.bundle.encoder_forward(features(20))
		self.char_vocab = self.bundle.char_vocab
		self.pinyin_vocab = self.bundle.pinyin_vocab

	def test_p2m_shape(self):
		ids = self.pinyin_vocab.encode(["wo", "hen", "happy"])
		logits = self.bundle.p2m_forward(apply_mask(ids, [1], self.pinyin_vocab.mask), self.hidden)
		self.assertEqual(logits.shape, (3, len(self.char_vocab)))

	def test_all_masked(self):
		masked = apply_mask([0, 0, 0, 0], [0, 1, 2, 3], self.pinyin_vocab.mask)
		probs = ops.softmax(self.bundle.p2m_forward(masked, self.hidden)).values
		self.assertTrue(np.all(np.isfinite(probs)))
		self.assertArrayClose(probs.sum(axis=1), np.ones(4), atol=1e-12)

	def test_cmlm_empty(self):
		self.assertEqual(self.bundle.cmlm_forward([], self.hidden).shape, (0, len(self.char_vocab)))

	def test_cmlm_shape(self):
		ids = self.char_vocab.encode(["我", "很", "happy", "day", "好", "狠", "我"])
		self.assertEqual(self.bundle.cmlm_forward(ids, self.hidden).shape, (7, len(self.char_vocab)))

	def test_conditioning(self):
		ids = self.char_vocab.encode(["我", "很", "happy"])
		first = self.bundle.cmlm_forward(apply_mask(ids, [1], self.char_vocab.mask), self.hidden).values[1]
		ids[0] = self.char_vocab.id_of["好"]
		second = self.bundle.cmlm_forward(apply_mask(ids, [1], self.char_vocab.mask), self.hidden).values[1]
		self.assertGreater(np.max(np.abs(first - second)), 1e-8)

	def test_out_of_range(self):
		with self.assertRaises(TensorIndexError):
			self.bundle.cmlm_forward([len(self.char_vocab)], self.hidden)

	def test_batch_order(self):
		utterances = [features(12, seed=1), features(20, seed=2), features(9, seed=3)]
		ids = [self.char_vocab.encode(["我", "很"]), self.char_vocab.encode(["day"]), self.char_vocab.encode(["好", "happy", "狠"])]

		def run(order):
			outputs = {}
			for idx in order:
				hidden, __ = self.bundle.encoder_forward(utterances[idx])
				outputs[idx] = self.bundle.cmlm_forward(ids[idx], hidden).values
			return outputs

		forward = run([0, 1, 2])
		backward = run([2, 1, 0])
		for idx in range(3):
			self.assertArrayEqual(forward[idx], backward[idx])

	def test_missing_decoder(self):
		bundle = tiny_bundle(CTC_ONLY)
		hidden, __ = bundle.encoder_forward(features(8))
		with self.assertRaises(CompatibilityError):
			bundle.cmlm_forward([4], hidden)
		with self.assertRaises(CompatibilityError):
			tiny_bundle(MASK_CTC).p2m_forward([4], hidden)

	def test_m2m_uses_characters(self):
		bundle = tiny_bundle(MASK_CTC_M2M)
		self.assertIs(bundle.ctc_vocab, bundle.char_vocab)
		self.assertEqual(bundle.p2m.embedding.shape, (len(bundle.char_vocab), 8))


class EndToEndGradientTest(SimpleTestCase):
	def setUp(self):
		self.bundle = tiny_bundle()
		self.feats = features(16, seed=4)
		self.pinyin_ids = self.bundle.pinyin_vocab.encode(["wo", "hen", "happy"])
		self.char_ids = self.bundle.char_vocab.encode(["我", "很", "happy"])

	def check(self, loss_fn, params):
		rng = np.random.default_rng(1)
		for param in params:
			error = parameter_grad_check(loss_fn, param, min_magnitude=1e-5, max_coords=30, rng=rng)
			self.assertLess(error, 1e-4)

	def test_encoder(self):
		def loss_fn():
			__, log_probs = self.bundle.encoder_forward(self.feats)
			return ctc_loss(log_probs, self.pinyin_ids, self.bundle.pinyin_vocab.blank)

		encoder = self.bundle.encoder
		self.check(loss_fn, [encoder.front.weight, encoder.layers[0].attention.query.weight, encoder.ctc.weight])

	def test_p2m(self):
		masked = apply_mask(self.pinyin_ids, [0, 2], self.bundle.pinyin_vocab.mask)

		def loss_fn():
			hidden, __ = self.bundle.encoder_forward(self.feats)
			return masked_ce(self.bundle.p2m_forward(masked, hidden), self.char_ids, masked.mask_positions)

		p2m = self.bundle.p2m
		self.check(loss_fn, [p2m.embedding, p2m.layers[0].cross_attention.key.weight, self.bundle.encoder.front.weight])

	def test_cmlm(self):
		masked = apply_mask(self.char_ids, [1], self.bundle.char_vocab.mask)

		def loss_fn():
			hidden, __ = self.bundle.encoder_forward(self.feats)
			return masked_ce(self.bundle.cmlm_forward(masked, hidden), self.char_ids, masked.mask_positions)

		cmlm = self.bundle.cmlm
		self.check(loss_fn, [cmlm.embedding, cmlm.layers[0].self_attention.value.weight, cmlm.output.weight])


class WeightTyingTest(ArrayAssertMixin, SimpleTestCase):
	def test_tied_embedding(self):
		bundle = tiny_bundle(MASK_CTC, tie_ctc_embedding=True)
		names = [name for name, __ in bundle.named_parameters()]
		self.assertNotIn('cmlm.embedding', names)
		self.assertArrayEqual(bundle.cmlm.embedding_matrix().values, bundle.w_ctc.values.T)

	def test_tied_gradient(self):
		bundle = tiny_bundle(MASK_CTC, tie_ctc_embedding=True)
		hidden, __ = bundle.encoder_forward(features(8))
		ids = bundle.char_vocab.encode(["我", "很"])
		masked = apply_mask(ids, [0], bundle.char_vocab.mask)
		masked_ce(bundle.cmlm_forward(masked, hidden.detach()), ids, [0]).backward()
		self.assertIsNotNone(bundle.w_ctc.grad)

	def test_tying_needs_char_ctc(self):
		with self.assertRaises(ConfigError):
			tiny_config(MASK_CTC_P2M, tie_ctc_embedding=True)


class MatRegPairTest(SimpleTestCase):
	def test_defaults(self):
		self.assertEqual(tiny_config(MASK_CTC).matreg_pair, 'ctc_cmlm')
		self.assertEqual(tiny_config(MASK_CTC_P2M).matreg_pair, 'p2m_cmlm')
		self.assertEqual(tiny_config(CTC_ONLY).matreg_pair, 'none')

	def test_shapes(self):
		bundle = tiny_bundle(MASK_CTC_P2M)
		w_a, w_b = bundle.matreg_pair()
		self.assertEqual(w_a.shape, (8, len(bundle.char_vocab)))
		self.assertEqual(w_a.shape, w_b.shape)
		w_a, w_b = tiny_bundle(MASK_CTC).matreg_pair()
		self.assertEqual(w_a.shape, w_b.shape)

	def test_incompatible_pair(self):
		bundle = tiny_bundle(MASK_CTC_P2M, matreg_pair='ctc_cmlm')
		with self.assertRaises(ConfigError):
			bundle.matreg_pair()

	def test_none(self):
		self.assertIsNone(tiny_bundle(CTC_ONLY).matreg_pair())


class ConfigTest(SimpleTestCase):
	def test_heads(self):
		with self.assertRaises(ConfigError):
			EncoderConfig(input_dim=3, model_dim=10, num_heads=4)

	def test_subsample(self):
		with self.assertRaises(ConfigError):
			EncoderConfig(input_dim=3, subsample_factor=0)

	def test_architecture(self):
		with self.assertRaises(ConfigError):
			tiny_config('mask_ctc_ar')

	def test_round_trip(self):
		config = tiny_config(MASK_CTC, matreg_pair='none')
		self.assertEqual(ModelConfig.from_dict(config.to_dict()).to_dict(), config.to_dict())


class CheckpointTest(TemporaryDirectoryMixin, ArrayAssertMixin, SimpleTestCase):
	def test_round_trip(self):
		bundle = tiny_bundle()
		path = self.tmp_path('model.mccs')
		save_checkpoint(bundle, path, meta={'epoch': 3, 'val_accuracy': 0.5})
		loaded = load_checkpoint(path)
		self.assertEqual(loaded.char_vocab, bundle.char_vocab)
		self.assertEqual(loaded.pinyin_vocab, bundle.pinyin_vocab)
		self.assertEqual(loaded.config.to_dict(), bundle.config.to_dict())
		self.assertEqual(loaded.meta['epoch'], 3)
		for (name, value), (other_name, other) in zip(bundle.named_parameters(), loaded.named_parameters()):
			self.assertEqual(name, other_name)
			self.assertEqual(value.values.tobytes(), other.values.tobytes())

	def test_magic(self):
		path = self.tmp_path('model.mccs')
		save_checkpoint(tiny_bundle(), path)
		with io.open(path, 'rb') as fp:
			self.assertEqual(fp.read(5), b'MCCS1')

	def test_truncated(self):
		path = self.tmp_path('model.mccs')
		save_checkpoint(tiny_bundle(), path)
		size = os.path.getsize(path)
		with io.open(path, 'rb') as fp:
			data = fp.read(size - 100)
		with io.open(path, 'wb') as fp:
			fp.write(data)
		with self.assertRaises(ContainerError) as ctx:
			load_checkpoint(path)
		self.assertIsNotNone(ctx.exception.array)

	def test_foreign_shape(self):
		bundle = tiny_bundle()
		path = self.tmp_path('model.mccs')
		save_checkpoint(bundle, path)
		header, arrays = read_container(path)
		arrays['encoder.ctc.bias'] = np.zeros(3)
		extra = dict((key, header[key]) for key in ('config', 'vocabs', 'meta'))
		write_container(path, arrays, extra)
		with self.assertRaises(CheckpointError) as ctx:
			load_checkpoint(path)
		self.assertEqual(ctx.exception.array, 'encoder.ctc.bias')
		self.assertIn('encoder.ctc.bias', str(ctx.exception))

	def test_version(self):
		path = self.tmp_path('model.mccs')
		with io.open(path, 'wb') as fp:
			fp.write(b'MCCS1{"arrays":[],"version":2}\n')
		with self.assertRaises(ContainerError):
			read_container(path)

	def test_not_a_checkpoint(self):
		path = self.tmp_path('model.mccs')
		with io.open(path, 'wb') as fp:
			fp.write(b'garbage')
		with self.assertRaises(ContainerError):
			load_checkpoint(path)


class AverageTest(TemporaryDirectoryMixin, ArrayAssertMixin, SimpleTestCase):
	def save(self, name, fill=None, accuracy=0.0, seed=5):
		bundle = tiny_bundle(seed=seed)
		if fill is not None:
			for __, value in bundle.named_parameters():
				value.values = np.full(value.shape, float(fill))
		path = self.tmp_path(name)
		save_checkpoint(bundle, path, meta={'val_accuracy': accuracy})
		return path, bundle

	def test_mean_of_constants(self):
		first, __ = self.save('a.mccs', fill=0.0, accuracy=0.1)
		second, __ = self.save('b.mccs', fill=2.0, accuracy=0.2)
		averaged = average_checkpoints([first, second], 2)
		for __, value in averaged.named_parameters():
			self.assertArrayEqual(value.values, np.ones(value.shape))

	def test_single(self):
		path, bundle = self.save('a.mccs', seed=9)
		averaged = average_checkpoints([path], 1)
		for name, array in bundle_arrays(bundle).items():
			self.assertArrayEqual(dict(averaged.named_parameters())[name].values, array)

	def test_top_k(self):
		paths = []
		bundles = []
		for idx, accuracy in enumerate([0.3, 0.9, 0.1, 0.7, 0.5]):
			path, bundle = self.save('c%d.mccs' % idx, accuracy=accuracy, seed=idx)
			paths.append(path)
			bundles.append(bundle)
		averaged = dict(average_checkpoints(paths, 3).named_parameters())
		chosen = [bundles[1], bundles[3], bundles[4]]
		for name, value in chosen[0].named_parameters():
			expected = np.zeros(value.shape)
			flat = expected.reshape(-1)
			for bundle in chosen:
				source = dict(bundle.named_parameters())[name].values.reshape(-1)
				for idx in range(flat.size):
					flat[idx] += source[idx]
			expected /= 3.0
			self.assertArrayClose(averaged[name].values, expected, atol=1e-12)

	def test_shape_mismatch(self):
		first, __ = self.save('a.mccs', accuracy=0.5)
		char_vocab, pinyin_vocab = build_vocab(CORPUS + ["更多 words"], PinyinTable(list(TABLE.mapping.items()) + [("更", "geng"), ("多", "duo")]))
		other = ModelBundle(tiny_config(), char_vocab, pinyin_vocab)
		second = self.tmp_path('b.mccs')
		save_checkpoint(other, second, meta={'val_accuracy': 0.4})
		with self.assertRaises(CheckpointError):
			average_checkpoints([first, second], 2)


class OptimizerTest(SimpleTestCase):
	def test_adam_descends(self):
		x = tensor([3.0, -2.0], requires_grad=True)
		optimizer = Adam([x], ConstantSchedule(0.05))
		for __ in range(400):
			optimizer.zero_grad()
			ops.sum_(x * x).backward()
			optimizer.step()
		self.assertLess(float(np.abs(x.values).max()), 0.5)

	def test_noam_peak(self):
		schedule = NoamSchedule(64, warmup_steps=100)
		self.assertLess(schedule(10), schedule(100))
		self.assertGreater(schedule(100), schedule(1000))
		self.assertAlmostEqual(schedule(100), 64 ** -0.5 * 100 ** -0.5)

	def test_clip(self):
		x = tensor([0.0, 0.0], requires_grad=True)
		x.grad = np.array([3.0, 4.0])
		self.assertAlmostEqual(clip_grad_norm([x], 1.0), 5.0)
		self.assertAlmostEqual(grad_norm([x]), 1.0)
