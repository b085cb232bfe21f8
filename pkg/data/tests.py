# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io
import os

import numpy as np
from django.test import SimpleTestCase

from .augment import AugmentConfig, spec_augment, augment
from .corpus import gen_corpus, manifest_path, CHAR_VOCAB_FILE, PINYIN_TABLE_FILE
from .exceptions import CorpusConfigError, SynthesisError, ManifestError
from .manifest import Manifest, ManifestRecord, read_manifest, write_manifest, write_features, read_features
from .synthesis import SynthConfig, Inventory, gen_transcript, gen_transcripts, synth_features, expected_composition
from common_utils import file_sha1
from common_utils.container import write_container
from common_utils.exceptions import ContainerError
from common_utils.json_utils import dumps
from common_utils.tests_common import TemporaryDirectoryMixin, ArrayAssertMixin
from vocab.pinyin import PinyinTable
from vocab.vocabulary import Vocabulary, is_cjk, tokenize, composition


def tiny_config(**kwargs):
	options = dict(num_chars=12, num_pinyin=6, num_eng_words=6, train_size=20, val_size=4, test_size=4, feature_dim=4)
	options.update(kwargs)
	return SynthConfig(**options)


def inventory_for(cfg):
	return Inventory.build(cfg, np.random.default_rng(cfg.seed))


class SynthConfigTest(SimpleTestCase):
	def test_defaults(self):
		cfg = SynthConfig()
		self.assertLess(cfg.num_pinyin, cfg.num_chars)
		self.assertEqual(list(cfg.split_sizes.keys()), ['train', 'val', 'test'])

	def test_pinyin_not_below_chars(self):
		with self.assertRaises(CorpusConfigError) as cm:
			SynthConfig(num_chars=10, num_pinyin=10)
		self.assertIn('num_pinyin', cm.exception.errors)
		self.assertEqual(cm.exception.exit_code, 2)

	def test_empty_ranges(self):
		with self.assertRaises(CorpusConfigError) as cm:
			SynthConfig(min_length=5, max_length=4, min_duration=3, max_duration=2, switch_prob=1.5)
		self.assertEqual(set(cm.exception.errors), {'min_length', 'min_duration', 'switch_prob'})


class InventoryTest(SimpleTestCase):
	def test_surjective_pronunciations(self):
		cfg = tiny_config(num_chars=50, num_pinyin=20)
		inventory = inventory_for(cfg)
		groups = inventory.table.homophones()
		self.assertEqual(len(groups), 20)
		self.assertTrue(all(len(chars) >= 1 for chars in groups.values()))
		self.assertGreaterEqual(max(len(chars) for chars in groups.values()), 3)
		self.assertEqual(sum(len(chars) for chars in groups.values()), 50)

	def test_words_never_collide_with_pinyin(self):
		inventory = inventory_for(SynthConfig())
		self.assertFalse(set(inventory.eng_words) & set(inventory.table.mapping.values()))

	def test_successors_change_pronunciation(self):
		inventory = inventory_for(SynthConfig())
		for char, successors in inventory.successors.items():
			self.assertTrue(successors)
			for successor in successors:
				self.assertNotEqual(inventory.table[successor], inventory.table[char])


class TranscriptTest(SimpleTestCase):
	def test_no_switching(self):
		cfg = SynthConfig(switch_prob=0.0)
		inventory = inventory_for(cfg)
		rng = np.random.default_rng(1)
		for __ in range(500):
			tokens = gen_transcript(inventory, cfg, rng)
			self.assertEqual(len(set(is_cjk(token) for token in tokens)), 1)

	def test_length_range(self):
		cfg = SynthConfig(min_length=2, max_length=4)
		inventory = inventory_for(cfg)
		rng = np.random.default_rng(2)
		lengths = set(len(gen_transcript(inventory, cfg, rng)) for __ in range(300))
		self.assertEqual(lengths, {2, 3, 4})

	def test_adjacent_pronunciations_differ(self):
		cfg = SynthConfig()
		inventory = inventory_for(cfg)
		rng = np.random.default_rng(3)
		for __ in range(2000):
			units = [inventory.unit(token) for token in gen_transcript(inventory, cfg, rng)]
			for left, right in zip(units, units[1:]):
				self.assertNotEqual(left, right)

	def test_composition_matches_config(self):
		cfg = SynthConfig(switch_prob=0.1, mandarin_prob=0.7)
		inventory = inventory_for(cfg)
		rng = np.random.default_rng(4)
		observed = composition([gen_transcript(inventory, cfg, rng) for __ in range(10000)])
		for key, value in expected_composition(cfg).items():
			self.assertAlmostEqual(observed[key], value, delta=0.02)

	def test_distinct(self):
		cfg = tiny_config()
		transcripts = gen_transcripts(inventory_for(cfg), cfg, np.random.default_rng(5), 200)
		self.assertEqual(len(set(tuple(tokens) for tokens in transcripts)), 200)

	def test_inventory_too_small(self):
		cfg = SynthConfig(num_chars=3, num_pinyin=2, num_eng_words=2, min_length=1, max_length=1)
		with self.assertRaises(CorpusConfigError):
			gen_transcripts(inventory_for(cfg), cfg, np.random.default_rng(6), 10)


class FeatureTest(ArrayAssertMixin, SimpleTestCase):
	def test_exact_templates(self):
		cfg = tiny_config(noise=0.0, min_duration=3, max_duration=3)
		inventory = inventory_for(cfg)
		tokens = [inventory.chars[0], inventory.eng_words[0], inventory.chars[1]]
		features = synth_features(tokens, inventory, cfg, np.random.default_rng(7))
		self.assertEqual(features.shape, (9, cfg.feature_dim))
		for idx, token in enumerate(tokens):
			for row in features[3 * idx:3 * idx + 3]:
				self.assertArrayEqual(row, inventory.template(token))

	def test_length_law(self):
		cfg = tiny_config(min_duration=2, max_duration=6)
		inventory = inventory_for(cfg)
		rng = np.random.default_rng(8)
		for __ in range(50):
			tokens = gen_transcript(inventory, cfg, rng)
			features = synth_features(tokens, inventory, cfg, rng)
			self.assertGreaterEqual(features.shape[0], 2 * len(tokens))
			self.assertLessEqual(features.shape[0], 6 * len(tokens))
		fixed = tiny_config(min_duration=5, max_duration=5)
		self.assertEqual(synth_features(tokens, inventory, fixed, rng).shape[0], 5 * len(tokens))

	def test_homophones_share_features(self):
		cfg = tiny_config()
		inventory = inventory_for(cfg)
		group = [chars for chars in inventory.table.homophones().values() if len(chars) > 1][0]
		first = synth_features(group[:1], inventory, cfg, np.random.default_rng(9))
		second = synth_features(group[1:2], inventory, cfg, np.random.default_rng(9))
		self.assertArrayEqual(first, second)

	def test_unknown_token(self):
		cfg = tiny_config()
		with self.assertRaises(SynthesisError):
			synth_features(["unknownword"], inventory_for(cfg), cfg, np.random.default_rng(10))
		with self.assertRaises(SynthesisError):
			synth_features(["龘"], inventory_for(cfg), cfg, np.random.default_rng(10))

	def test_linear_probe(self):
		cfg = SynthConfig(num_chars=12, num_pinyin=8, num_eng_words=8, feature_dim=32, noise=0.1)
		inventory = inventory_for(cfg)
		units = list(inventory.templates.keys())
		tokens = [inventory.table.homophones()[unit][0] if unit in inventory.table.homophones() else unit for unit in units]
		rng = np.random.default_rng(11)

		def sample(count):
			inputs = []
			labels = []
			for __ in range(count):
				for label, token in enumerate(tokens):
					inputs.append(synth_features([token], inventory, cfg, rng).mean(axis=0))
					labels.append(label)
			return np.array(inputs), np.array(labels)

		train_x, train_y = sample(20)
		test_x, test_y = sample(10)
		weights = np.linalg.lstsq(np.hstack([train_x, np.ones((len(train_x), 1))]), np.eye(len(units))[train_y], rcond=None)[0]
		predicted = np.argmax(np.hstack([test_x, np.ones((len(test_x), 1))]) @ weights, axis=1)
		self.assertEqual(len(units), 16)
		self.assertGreater(np.mean(predicted == test_y), 0.9)


class AugmentTest(ArrayAssertMixin, SimpleTestCase):
	def setUp(self):
		super(AugmentTest, self).setUp()
		self.features = np.ones((20, 6))

	def test_identity(self):
		out = spec_augment(self.features, 0, 5, 0, 2, np.random.default_rng(12))
		self.assertArrayEqual(out, self.features)
		self.assertIsNot(out, self.features)

	def test_full_width(self):
		self.assertFalse(spec_augment(self.features, 1, 20, 0, 0, np.random.default_rng(13)).any())
		self.assertFalse(spec_augment(self.features, 1, 50, 0, 0, np.random.default_rng(13)).any())
		self.assertFalse(spec_augment(self.features, 0, 0, 1, 6, np.random.default_rng(13)).any())

	def test_area(self):
		out = spec_augment(self.features, 1, 3, 0, 0, np.random.default_rng(14))
		self.assertEqual(int(np.sum(out == 0.0)), 3 * 6)
		out = spec_augment(self.features, 0, 0, 1, 2, np.random.default_rng(15))
		self.assertEqual(int(np.sum(out == 0.0)), 2 * 20)
		self.assertTrue(np.all(self.features == 1.0))

	def test_deterministic(self):
		cfg = AugmentConfig()
		self.assertArrayEqual(augment(self.features, cfg, np.random.default_rng(16)), augment(self.features, cfg, np.random.default_rng(16)))

	def test_negative_width(self):
		with self.assertRaises(CorpusConfigError):
			AugmentConfig(time_width=-1)


class ManifestTest(TemporaryDirectoryMixin, ArrayAssertMixin, SimpleTestCase):
	def write_lines(self, lines):
		path = self.tmp_path('test.jsonl')
		with io.open(path, 'w', encoding='utf-8') as fp:
			for line in lines:
				fp.write(line + '\n')
		return path

	def record_line(self, **kwargs):
		data = {'utt_id': 'a', 'text': "我很 happy", 'feats_path': 'a.mccs', 'num_frames': 3}
		data.update(kwargs)
		return dumps(data)

	def test_round_trip(self):
		write_features(self.tmp_path('a.mccs'), np.arange(12.0).reshape(3, 4))
		write_features(self.tmp_path('b.mccs'), np.ones((2, 4)))
		manifest = Manifest([
			ManifestRecord('a', "我很 happy", 'a.mccs', 3),
			ManifestRecord('b', "day", 'b.mccs', 2),
		])
		write_manifest(manifest, self.tmp_path('test.jsonl'))
		loaded = read_manifest(self.tmp_path('test.jsonl'))
		self.assertEqual(loaded, manifest)
		self.assertEqual(loaded.tokens()['a'], ["我", "很", "happy"])
		self.assertArrayEqual(loaded.load_features(loaded['a']), np.arange(12.0).reshape(3, 4))

	def test_duplicate(self):
		write_features(self.tmp_path('a.mccs'), np.ones((3, 4)))
		path = self.write_lines([self.record_line(), self.record_line()])
		with self.assertRaises(ManifestError) as cm:
			read_manifest(path)
		self.assertEqual(cm.exception.lineno, 2)
		with self.assertRaises(ManifestError):
			Manifest([ManifestRecord('a', "", 'a.mccs', 1)] * 2)

	def test_empty(self):
		with self.assertLogs('codeswitch', 'WARNING'):
			self.assertEqual(len(read_manifest(self.write_lines([]))), 0)

	def test_missing_field(self):
		path = self.write_lines(['{"utt_id": "a", "text": "x", "num_frames": 3}'])
		with self.assertRaises(ManifestError) as cm:
			read_manifest(path, check_files=False)
		self.assertIn('feats_path', str(cm.exception))
		self.assertEqual(cm.exception.lineno, 1)

	def test_dangling_reference(self):
		path = self.write_lines([self.record_line(feats_path='missing.mccs')])
		with self.assertRaises(ManifestError):
			read_manifest(path)
		self.assertEqual(len(read_manifest(path, check_files=False)), 1)

	def test_malformed(self):
		path = self.write_lines([self.record_line(), '{"utt_id": '])
		with self.assertRaises(ManifestError) as cm:
			read_manifest(path, check_files=False)
		self.assertEqual(cm.exception.lineno, 2)
		with self.assertRaises(ManifestError):
			read_manifest(self.write_lines([self.record_line(num_frames=0)]), check_files=False)

	def test_features_container(self):
		path = self.tmp_path('f.mccs')
		write_features(path, np.zeros((5, 2)))
		self.assertEqual(read_features(path).shape, (5, 2))

	def test_features_array_missing(self):
		path = self.tmp_path('f.mccs')
		write_container(path, {'weights': np.zeros((5, 2))})
		with self.assertRaises(ContainerError) as cm:
			read_features(path)
		self.assertEqual(cm.exception.array, 'feats')
		self.assertEqual(cm.exception.exit_code, 1)


class CorpusTest(TemporaryDirectoryMixin, SimpleTestCase):
	def test_files(self):
		corpus = gen_corpus(tiny_config(), self.tmp_path('corpus'))
		out_dir = self.tmp_path('corpus')
		self.assertEqual([len(m) for m in corpus.manifests.values()], [20, 4, 4])
		for split in ('train', 'val', 'test'):
			self.assertEqual(read_manifest(manifest_path(out_dir, split)), corpus.manifests[split])
		self.assertEqual(Vocabulary.load(os.path.join(out_dir, CHAR_VOCAB_FILE)), corpus.char_vocab)
		self.assertEqual(PinyinTable.load(os.path.join(out_dir, PINYIN_TABLE_FILE)), corpus.pinyin_table)
		for char in corpus.inventory.chars:
			self.assertIn(char, corpus.char_vocab)

	def test_disjoint_splits(self):
		corpus = gen_corpus(tiny_config(), self.tmp_path('corpus'))
		texts = [set(manifest.texts()) for manifest in corpus.manifests.values()]
		self.assertFalse(texts[0] & texts[1])
		self.assertFalse(texts[0] & texts[2])
		self.assertFalse(texts[1] & texts[2])

	def test_feature_lengths(self):
		corpus = gen_corpus(tiny_config(), self.tmp_path('corpus'))
		manifest = corpus.manifests['val']
		for record in manifest:
			features = manifest.load_features(record)
			self.assertEqual(features.shape, (record.num_frames, 4))
			self.assertEqual(tokenize(record.text), manifest.tokens()[record.utt_id])

	def test_deterministic(self):
		gen_corpus(tiny_config(), self.tmp_path('first'))
		gen_corpus(tiny_config(), self.tmp_path('second'))
		names = []
		for root, __, files in os.walk(self.tmp_path('first')):
			for name in files:
				names.append(os.path.relpath(os.path.join(root, name), self.tmp_path('first')))
		self.assertTrue(names)
		for name in names:
			self.assertEqual(file_sha1(self.tmp_path('first', name)), file_sha1(self.tmp_path('second', name)))
		gen_corpus(tiny_config(seed=1), self.tmp_path('third'))
		self.assertNotEqual(file_sha1(self.tmp_path('first', 'train.jsonl')), file_sha1(self.tmp_path('third', 'train.jsonl')))
