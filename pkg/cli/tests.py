# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import glob
import io
import os
import shutil
import tempfile

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from .exceptions import TrainingDivergedError
from .forms import load_run_config, validate_sections, SELECT_BEST_LOSS, SELECT_BEST_ACCURACY
from .management.commands.decode import sweep_path, parse_thresholds
from .training import Trainer, TrainingItem, EpochResult, manifest_items, select_best, checkpoint_path, BEST_CHECKPOINT, TRAIN_LOG
from common_utils import file_sha1
from common_utils.exceptions import ConfigError
from common_utils.json_utils import read_json, read_json_lines, write_json
from common_utils.tests_common import TemporaryDirectoryMixin, replication_test
from data.corpus import gen_corpus, manifest_path, CHAR_VOCAB_FILE, PINYIN_VOCAB_FILE, CORPUS_INFO_FILE
from data.manifest import read_manifest
from decode.pipeline import DecodeConfig, decode_corpus, measure_rtf, read_hypotheses
from model.checkpoint import read_meta, load_checkpoint
from model.networks import ModelBundle, CTC_ONLY, MASK_CTC, MASK_CTC_P2M
from score.report import COLUMNS
from vocab.pinyin import tokens_to_pinyin
from web.settings import CODESWITCH_DEFAULTS as FULL_DEFAULTS


def run(name, *args, **kwargs):
	out = io.StringIO()
	call_command(name, *args, stdout=out, **kwargs)
	return out.getvalue()


def tree_hashes(directory):
	hashes = {}
	for root, __, files in os.walk(directory):
		for name in files:
			path = os.path.join(root, name)
			hashes[os.path.relpath(path, directory)] = file_sha1(path)
	return hashes


class RunConfigTest(TemporaryDirectoryMixin, SimpleTestCase):
	def test_defaults(self):
		config = load_run_config()
		self.assertEqual(config['data']['num_chars'], 12)
		self.assertEqual(config.synth.num_pinyin, 6)
		self.assertEqual(config.optim.batch_size, 4)
		self.assertEqual(config.decode(MASK_CTC).p_thres, 0.99)

	def test_model_config(self):
		config = load_run_config()
		model_cfg = config.model(input_dim=7, architecture=MASK_CTC_P2M)
		self.assertEqual(model_cfg.architecture, MASK_CTC_P2M)
		self.assertEqual(model_cfg.encoder.input_dim, 7)
		self.assertEqual(model_cfg.matreg_pair, 'p2m_cmlm')
		self.assertEqual(config.model().encoder.input_dim, 4)

	def test_unknown_key(self):
		with self.assertRaises(ConfigError) as cm:
			load_run_config(overrides={'model': {'hidden': 3}})
		self.assertIn('model', cm.exception.errors)
		self.assertIn('hidden', str(cm.exception))

	def test_unknown_section(self):
		with self.assertRaises(ConfigError) as cm:
			load_run_config(overrides={'decoder': {}})
		self.assertIn('decoder', cm.exception.errors)

	def test_pinyin_not_below_chars(self):
		with self.assertRaises(ConfigError) as cm:
			load_run_config(overrides={'data': {'num_pinyin': 12}})
		self.assertIn('data.num_pinyin', cm.exception.errors)
		self.assertEqual(cm.exception.exit_code, 2)

	def test_heads_divide_dim(self):
		with self.assertRaises(ConfigError) as cm:
			load_run_config(overrides={'model': {'num_heads': 3}})
		self.assertIn('model.num_heads', cm.exception.errors)

	def test_epsilon_range(self):
		with self.assertRaises(ConfigError) as cm:
			load_run_config(overrides={'loss': {'epsilon': 0.0}})
		self.assertIn('loss.epsilon', cm.exception.errors)

	def test_several_errors(self):
		with self.assertRaises(ConfigError) as cm:
			load_run_config(overrides={'data': {'min_length': 5, 'max_length': 2}, 'decode': {'p_thres': 2.0}})
		self.assertIn('data.min_length', cm.exception.errors)
		self.assertIn('decode.p_thres', cm.exception.errors)

	def test_seed(self):
		config = load_run_config(seed=42)
		self.assertEqual(config['data']['seed'], 42)
		self.assertEqual(config['model']['seed'], 42)
		self.assertEqual(config.optim.seed, 42)

	def test_file(self):
		path = self.tmp_path('config.json')
		write_json(path, {'decode': {'iterations': 3}})
		config = load_run_config(path)
		self.assertEqual(config.decode(MASK_CTC).iterations, 3)
		self.assertEqual(config['decode']['p_thres'], 0.99)

	def test_malformed_file(self):
		path = self.tmp_path('config.json')
		with io.open(path, 'w', encoding='utf-8') as fp:
			fp.write('{"data": ')
		with self.assertRaises(ConfigError):
			load_run_config(path)

	def test_not_object(self):
		with self.assertRaises(ConfigError):
			validate_sections([1, 2])

	def test_round_trip(self):
		config = load_run_config()
		self.assertEqual(validate_sections(config.to_dict()).to_dict(), config.to_dict())


class SelectBestTest(SimpleTestCase):
	def results(self):
		return [
			EpochResult(1, 3.0, 2.0, 0.5, 0.6, 'a'),
			EpochResult(2, 2.0, 1.5, 0.7, 0.4, 'b'),
			EpochResult(3, 1.0, 1.5, 0.7, 0.3, 'c'),
		]

	def test_best_loss(self):
		self.assertEqual(select_best(self.results(), SELECT_BEST_LOSS).epoch, 2)

	def test_best_accuracy(self):
		self.assertEqual(select_best(self.results(), SELECT_BEST_ACCURACY).epoch, 2)

	def test_missing_loss(self):
		results = [EpochResult(1, None, None, 0.1, 1.0, 'a'), EpochResult(2, 1.0, 4.0, 0.1, 1.0, 'b')]
		self.assertEqual(select_best(results, SELECT_BEST_LOSS).epoch, 2)


class DecodeOptionsTest(SimpleTestCase):
	def test_sweep_path(self):
		self.assertEqual(sweep_path('/tmp/hyp.jsonl', 0.5), '/tmp/hyp.p0.5.jsonl')
		self.assertEqual(sweep_path('/tmp/hyp', 0.99), '/tmp/hyp.p0.99.jsonl')

	def test_thresholds(self):
		self.assertEqual(parse_thresholds('0.5, 0.9,0.99'), [0.5, 0.9, 0.99])
		with self.assertRaises(ConfigError):
			parse_thresholds('0.5,high')
		with self.assertRaises(ConfigError):
			parse_thresholds(',')


class TrainerTest(TemporaryDirectoryMixin, SimpleTestCase):
	def setUp(self):
		super(TrainerTest, self).setUp()
		self.config = load_run_config()
		self.corpus = gen_corpus(self.config.synth, self.tmp_path('corpus'))
		self.train_items = manifest_items(self.corpus.manifests['train'], 8)
		self.val_items = manifest_items(self.corpus.manifests['val'])

	def trainer(self, architecture=MASK_CTC, **kwargs):
		bundle = ModelBundle(self.config.model(architecture=architecture), self.corpus.char_vocab, self.corpus.pinyin_vocab)
		kwargs.setdefault('pinyin_table', self.corpus.pinyin_table)
		return Trainer(bundle, self.config.loss, self.config.optim, self.config.decode(architecture), self.tmp_path('exp'), **kwargs)

	def test_ctc_only_weights(self):
		trainer = self.trainer(CTC_ONLY)
		self.assertEqual(trainer.loss_cfg.alpha, 1.0)
		self.assertEqual(trainer.loss_cfg.beta, 0.0)
		loss, (correct, total) = trainer.utterance_loss(self.train_items[0].features, self.train_items[0].tokens, np.random.default_rng(0))
		self.assertTrue(np.isfinite(loss.item()))
		self.assertEqual(total, 0)

	def test_pinyin_targets(self):
		trainer = self.trainer(MASK_CTC_P2M)
		tokens = self.train_items[0].tokens
		ctc_ids, char_ids = trainer.reference_ids(tokens)
		self.assertEqual(len(ctc_ids), len(char_ids))
		self.assertEqual(trainer.bundle.char_vocab.decode(char_ids), tokens)
		self.assertEqual(trainer.bundle.pinyin_vocab.decode(ctc_ids), tokens_to_pinyin(tokens, self.corpus.pinyin_table))

	def test_default_smoothing_skips_specials(self):
		trainer = self.trainer()
		vocab = trainer.bundle.char_vocab
		q = trainer.smooth(vocab.id_of[self.train_items[0].tokens[0]])
		self.assertEqual(q[vocab.mask], 0.0)
		self.assertEqual(q[vocab.blank], 0.0)
		self.assertAlmostEqual(q.sum(), 1.0, places=12)

	def test_pinyin_table_required(self):
		with self.assertRaises(ConfigError):
			self.trainer(MASK_CTC_P2M, pinyin_table=None)

	def test_batch_updates_parameters(self):
		trainer = self.trainer()
		before = [param.values.copy() for param in trainer.params]
		loss = trainer.train_batch(self.train_items[:4])
		self.assertTrue(np.isfinite(loss))
		self.assertEqual(trainer.optimizer.step_count, 1)
		self.assertTrue(any(not np.array_equal(old, param.values) for old, param in zip(before, trainer.params)))

	def test_infeasible_skipped(self):
		trainer = self.trainer()
		tokens = self.corpus.inventory.chars[:4]
		item = TrainingItem('short', np.zeros((4, self.config.synth.feature_dim)), tokens)
		with self.assertLogs('codeswitch', level='WARNING'):
			self.assertIsNone(trainer.train_batch([item]))
		self.assertEqual(trainer.optimizer.step_count, 0)

	def test_divergence(self):
		trainer = self.trainer()
		trainer.train_batch(self.train_items[:2])
		features = self.train_items[0].features.copy()
		features[0, 0] = np.nan
		with self.assertRaises(TrainingDivergedError) as cm:
			trainer.train_batch([TrainingItem('nan', features, self.train_items[0].tokens)])
		self.assertEqual(cm.exception.batch_id, 2)
		self.assertEqual(cm.exception.exit_code, 3)
		self.assertIn('batch 2', str(cm.exception))

	def test_evaluate_repeatable(self):
		trainer = self.trainer(MASK_CTC_P2M)
		first = trainer.evaluate(self.val_items)
		second = trainer.evaluate(self.val_items)
		self.assertEqual(first.loss, second.loss)
		self.assertEqual(first.accuracy, second.accuracy)
		self.assertEqual(first.ter, second.ter)
		self.assertTrue(0.0 <= first.accuracy <= 1.0)

	def test_fit(self):
		trainer = self.trainer()
		results = trainer.fit(self.train_items, self.val_items, epochs=2)
		self.assertEqual([result.epoch for result in results], [1, 2])
		for result in results:
			self.assertTrue(os.path.isfile(checkpoint_path(trainer.out_dir, result.epoch)))
			self.assertEqual(read_meta(result.checkpoint)['epoch'], result.epoch)
		best = select_best(results, SELECT_BEST_LOSS)
		self.assertEqual(file_sha1(os.path.join(trainer.out_dir, BEST_CHECKPOINT)), file_sha1(best.checkpoint))
		log = read_json_lines(os.path.join(trainer.out_dir, TRAIN_LOG))
		self.assertEqual([record['epoch'] for __, record in log], [1, 2])
		self.assertIn('lr', log[0][1])

	def test_fit_resets_log(self):
		self.trainer().fit(self.train_items, self.val_items, epochs=1)
		self.trainer().fit(self.train_items, self.val_items, epochs=1)
		self.assertEqual(len(read_json_lines(self.tmp_path('exp', TRAIN_LOG))), 1)


class GenDataCommandTest(TemporaryDirectoryMixin, SimpleTestCase):
	def test_files(self):
		out_dir = self.tmp_path('corpus')
		output = run('gen_data', out=out_dir)
		self.assertIn(out_dir, output)
		for split in ('train', 'val', 'test'):
			self.assertTrue(os.path.isfile(manifest_path(out_dir, split)))
		self.assertEqual(len(read_manifest(manifest_path(out_dir, 'train'))), 24)
		info = read_json(os.path.join(out_dir, CORPUS_INFO_FILE))
		self.assertEqual(info['config']['num_chars'], 12)

	def test_deterministic(self):
		run('gen_data', out=self.tmp_path('a'))
		run('gen_data', out=self.tmp_path('b'))
		self.assertEqual(tree_hashes(self.tmp_path('a')), tree_hashes(self.tmp_path('b')))

	def test_seed(self):
		run('gen_data', out=self.tmp_path('a'), seed=1)
		run('gen_data', out=self.tmp_path('b'), seed=2)
		self.assertNotEqual(tree_hashes(self.tmp_path('a')), tree_hashes(self.tmp_path('b')))

	def test_invalid_config(self):
		path = self.tmp_path('config.json')
		write_json(path, {'data': {'num_pinyin': 20}})
		with self.assertRaises(CommandError) as cm:
			run('gen_data', out=self.tmp_path('corpus'), config=path)
		self.assertEqual(cm.exception.returncode, 2)

	def test_missing_config(self):
		with self.assertRaises(CommandError) as cm:
			run('gen_data', out=self.tmp_path('corpus'), config=self.tmp_path('missing.json'))
		self.assertEqual(cm.exception.returncode, 1)


class PipelineCommandTest(SimpleTestCase):
	"""
	Generovanie, trénovanie, dekódovanie a vyhodnotenie na malom korpuse.
	"""

	@classmethod
	def setUpClass(cls):
		super(PipelineCommandTest, cls).setUpClass()
		cls.tmp_dir = tempfile.mkdtemp(prefix='codeswitch-test-')
		cls.data_dir = os.path.join(cls.tmp_dir, 'corpus')
		cls.exp_dir = os.path.join(cls.tmp_dir, 'exp')
		run('gen_data', out=cls.data_dir)
		run('train', data=cls.data_dir, out=cls.exp_dir, epochs=2)
		cls.checkpoint = os.path.join(cls.exp_dir, BEST_CHECKPOINT)
		cls.test_manifest = manifest_path(cls.data_dir, 'test')

	@classmethod
	def tearDownClass(cls):
		shutil.rmtree(cls.tmp_dir, ignore_errors=True)
		super(PipelineCommandTest, cls).tearDownClass()

	def path(self, name):
		return os.path.join(self.tmp_dir, name)

	def decode(self, out, **kwargs):
		return run('decode', checkpoint=self.checkpoint, manifest=self.test_manifest, out=out, **kwargs)

	def test_train_outputs(self):
		self.assertEqual(len(glob.glob(os.path.join(self.exp_dir, 'checkpoints', 'epoch*.mccs'))), 2)
		self.assertTrue(os.path.isfile(self.checkpoint))
		self.assertEqual(len(read_json_lines(os.path.join(self.exp_dir, TRAIN_LOG))), 2)
		self.assertEqual(read_json(os.path.join(self.exp_dir, 'config.json'))['model']['architecture'], MASK_CTC)
		self.assertEqual(load_checkpoint(self.checkpoint).architecture, MASK_CTC)

	def test_decode_and_score(self):
		hyp_path = self.path('hyp.jsonl')
		output = self.decode(hyp_path)
		self.assertIn('RTF', output)
		hypotheses = read_hypotheses(hyp_path)
		self.assertEqual([hyp.utt_id for hyp in hypotheses], list(read_manifest(self.test_manifest).tokens().keys()))
		report_path = self.path('score.json')
		output = run('score', ref=self.test_manifest, hyp=hyp_path, out=report_path, system='mask_ctc')
		self.assertIn('mask_ctc', output)
		self.assertIn('PER', output)
		report = read_json(report_path)
		counts = report['counts']
		self.assertAlmostEqual(report['ter'] * report['ref_total'], counts['sub'] + counts['del'] + counts['ins'])
		columns = report['columns']
		self.assertAlmostEqual(columns['ter'], columns['sub'] + columns['del_all'] + columns['ins'])
		self.assertLessEqual(report['per'], report['ter'])

	def test_sweep(self):
		out = self.path('sweep.jsonl')
		self.decode(out, sweep='0.5,0.999')
		low = read_hypotheses(self.path('sweep.p0.5.jsonl'))
		high = read_hypotheses(self.path('sweep.p0.999.jsonl'))
		self.assertLessEqual(sum(len(hyp.masked_positions) for hyp in low), sum(len(hyp.masked_positions) for hyp in high))

	def test_ctc_only_mode(self):
		out = self.path('ctc.jsonl')
		self.decode(out, mode=CTC_ONLY)
		self.assertTrue(all(hyp.masked_positions == [] for hyp in read_hypotheses(out)))

	def test_mode_mismatch(self):
		with self.assertRaises(CommandError) as cm:
			self.decode(self.path('p2m.jsonl'), mode=MASK_CTC_P2M)
		self.assertEqual(cm.exception.returncode, 2)

	def test_vocabulary_mismatch(self):
		with self.assertRaises(CommandError) as cm:
			self.decode(self.path('other.jsonl'), char_vocab=os.path.join(self.data_dir, PINYIN_VOCAB_FILE))
		self.assertEqual(cm.exception.returncode, 2)

	def test_matching_vocabulary(self):
		out = self.path('explicit.jsonl')
		self.decode(out, char_vocab=os.path.join(self.data_dir, CHAR_VOCAB_FILE))
		self.assertTrue(os.path.isfile(out))

	def test_analyze_self(self):
		hyp_path = self.path('self.jsonl')
		self.decode(hyp_path)
		out = self.path('analysis.json')
		run('analyze', hyp_path, hyp_path, ref=self.test_manifest, out=out)
		result = read_json(out)
		self.assertEqual(result['mcnemar_p'], 1.0)
		self.assertEqual(result['utterances'], 6)
		for key in COLUMNS:
			self.assertEqual(result['columns'][key]['delta'], 0.0)
			self.assertEqual(result['columns'][key]['ttest_p'], 1.0)

	def test_score_missing_hypotheses(self):
		with self.assertRaises(CommandError) as cm:
			run('score', ref=self.test_manifest, hyp=self.path('missing.jsonl'))
		self.assertEqual(cm.exception.returncode, 1)

	def test_avg_ckpt(self):
		out = self.path('avg.mccs')
		run('avg_ckpt', self.exp_dir, k=2, out=out)
		meta = read_meta(out)
		self.assertEqual(len(meta['averaged']), 2)
		bundle = load_checkpoint(out)
		self.assertEqual(bundle.architecture, MASK_CTC)


class ArchitectureCommandTest(TemporaryDirectoryMixin, SimpleTestCase):
	def setUp(self):
		super(ArchitectureCommandTest, self).setUp()
		self.data_dir = self.tmp_path('corpus')
		run('gen_data', out=self.data_dir)

	def test_ctc_only(self):
		out_dir = self.tmp_path('ctc')
		run('train', data=self.data_dir, out=out_dir, architecture=CTC_ONLY, limit=8, select='best_accuracy')
		config = read_json(os.path.join(out_dir, 'config.json'))
		self.assertEqual(config['model']['architecture'], CTC_ONLY)
		self.assertEqual(config['optim']['select'], 'best_accuracy')
		self.assertEqual(read_meta(os.path.join(out_dir, BEST_CHECKPOINT))['architecture'], CTC_ONLY)

	def test_p2m_with_embedding_smoothing(self):
		config_path = self.tmp_path('config.json')
		write_json(config_path, {'loss': {'smoothing': 'embedding'}})
		out_dir = self.tmp_path('p2m')
		run('train', data=self.data_dir, out=out_dir, architecture=MASK_CTC_P2M, limit=8, config=config_path)
		checkpoint = os.path.join(out_dir, BEST_CHECKPOINT)
		self.assertEqual(read_meta(checkpoint)['architecture'], MASK_CTC_P2M)
		hyp_path = self.tmp_path('hyp.jsonl')
		run('decode', checkpoint=checkpoint, manifest=manifest_path(self.data_dir, 'test'), out=hyp_path)
		self.assertEqual(len(read_hypotheses(hyp_path)), 6)

	def test_missing_corpus(self):
		with self.assertRaises(CommandError) as cm:
			run('train', data=self.tmp_path('nothing'), out=self.tmp_path('exp'))
		self.assertEqual(cm.exception.returncode, 1)


@replication_test
class ReplicationTest(SimpleTestCase):
	"""
	Trénovanie na plnom predvolenom korpuse. Overuje len smer rozdielov
	medzi architektúrami, nie absolútne hodnoty.
	"""

	ARCHITECTURES = (CTC_ONLY, MASK_CTC, MASK_CTC_P2M)

	@classmethod
	def setUpClass(cls):
		super(ReplicationTest, cls).setUpClass()
		cls.tmp_dir = tempfile.mkdtemp(prefix='codeswitch-replication-')
		cls.config_path = os.path.join(cls.tmp_dir, 'config.json')
		write_json(cls.config_path, FULL_DEFAULTS)
		cls.data_dir = os.path.join(cls.tmp_dir, 'corpus')
		run('gen_data', out=cls.data_dir, config=cls.config_path)
		cls.reports = {}
		for architecture in cls.ARCHITECTURES:
			out_dir = os.path.join(cls.tmp_dir, architecture)
			run('train', data=cls.data_dir, out=out_dir, architecture=architecture, config=cls.config_path)
			cls.reports[architecture] = cls.evaluate(os.path.join(out_dir, BEST_CHECKPOINT), architecture)

	@classmethod
	def tearDownClass(cls):
		shutil.rmtree(cls.tmp_dir, ignore_errors=True)
		super(ReplicationTest, cls).tearDownClass()

	@classmethod
	def evaluate(cls, checkpoint, name, config_path=None):
		test_manifest = manifest_path(cls.data_dir, 'test')
		hyp_path = os.path.join(cls.tmp_dir, '%s.jsonl' % name)
		report_path = os.path.join(cls.tmp_dir, '%s.json' % name)
		run('decode', checkpoint=checkpoint, manifest=test_manifest, out=hyp_path, config=config_path or cls.config_path)
		run('score', ref=test_manifest, hyp=hyp_path, out=report_path)
		return read_json(report_path)

	def test_training_loss_decreases(self):
		log = [record for __, record in read_json_lines(os.path.join(self.tmp_dir, MASK_CTC, TRAIN_LOG))]
		self.assertLess(log[4]['train_loss'], log[0]['train_loss'])

	def test_mask_ctc_beats_ctc(self):
		self.assertLessEqual(self.reports[MASK_CTC]['ter'], self.reports[CTC_ONLY]['ter'] - 0.02)

	def test_p2m_not_worse(self):
		self.assertLessEqual(self.reports[MASK_CTC_P2M]['ter'], self.reports[MASK_CTC]['ter'])

	def test_p2m_homophones(self):
		ratio = lambda report: report['per'] / report['ter']
		self.assertLess(ratio(self.reports[MASK_CTC_P2M]), ratio(self.reports[MASK_CTC]))

	def test_averaging(self):
		exp_dir = os.path.join(self.tmp_dir, MASK_CTC)
		averaged = os.path.join(exp_dir, 'avg5.mccs')
		run('avg_ckpt', exp_dir, k=5, out=averaged)
		single = min(
			self.evaluate(path, 'single-%s' % os.path.basename(path))['ter']
			for path in sorted(glob.glob(os.path.join(exp_dir, 'checkpoints', 'epoch*.mccs')))
		)
		self.assertLessEqual(self.evaluate(averaged, 'avg5')['ter'], single + 0.01)

	def test_embedding_smoothing_with_matreg(self):
		limit = FULL_DEFAULTS['data']['train_size'] // 10
		ters = {}
		for name, loss in (('plain', {'smoothing': 'conventional', 'beta': 0.0}), ('emb_matreg', {'smoothing': 'embedding', 'beta': 1e-4})):
			config_path = os.path.join(self.tmp_dir, '%s.config.json' % name)
			write_json(config_path, dict(FULL_DEFAULTS, loss=dict(FULL_DEFAULTS['loss'], **loss)))
			out_dir = os.path.join(self.tmp_dir, name)
			run('train', data=self.data_dir, out=out_dir, architecture=MASK_CTC_P2M, limit=limit, config=config_path)
			ters[name] = self.evaluate(os.path.join(out_dir, BEST_CHECKPOINT), name)['ter']
		self.assertLessEqual(ters['emb_matreg'], ters['plain'] + 0.003)

	def test_weight_tying_not_better_than_matreg(self):
		limit = FULL_DEFAULTS['data']['train_size'] // 10
		ters = {}
		runs = (
			('tied', {'tie_ctc_embedding': True}, {'beta': 0.0}),
			('matreg', {'tie_ctc_embedding': False}, {'beta': 1e-4}),
		)
		for name, model, loss in runs:
			config_path = os.path.join(self.tmp_dir, '%s.config.json' % name)
			write_json(config_path, dict(
				FULL_DEFAULTS,
				model=dict(FULL_DEFAULTS['model'], **model),
				loss=dict(FULL_DEFAULTS['loss'], **loss)
			))
			out_dir = os.path.join(self.tmp_dir, name)
			run('train', data=self.data_dir, out=out_dir, architecture=MASK_CTC, limit=limit, config=config_path)
			ters[name] = self.evaluate(os.path.join(out_dir, BEST_CHECKPOINT), name, config_path)['ter']
		self.assertGreaterEqual(ters['tied'] + 0.003, ters['matreg'])

	def test_more_iterations_not_worse(self):
		checkpoint = os.path.join(self.tmp_dir, MASK_CTC, BEST_CHECKPOINT)
		ters = {}
		for iterations in (1, 2, 5, 10):
			config_path = os.path.join(self.tmp_dir, 'k%d.config.json' % iterations)
			write_json(config_path, dict(FULL_DEFAULTS, decode=dict(FULL_DEFAULTS['decode'], iterations=iterations)))
			ters[iterations] = self.evaluate(checkpoint, 'k%d' % iterations, config_path)['ter']
		for iterations, ter in ters.items():
			self.assertLessEqual(ter, ters[1] + 0.02, "K=%d" % iterations)

	def test_iterations_cost_time(self):
		bundle = load_checkpoint(os.path.join(self.tmp_dir, MASK_CTC, BEST_CHECKPOINT))
		items = list(read_manifest(manifest_path(self.data_dir, 'test')).items())
		# four utterances joined so every one of ten iterations has masks to fill
		joined = [
			('joined%d' % idx, np.concatenate([features for __, features in items[idx:idx + 4]]))
			for idx in range(0, 80, 4)
		]
		rtf = {}
		for iterations in (1, 10):
			rtf[iterations] = measure_rtf(decode_corpus(joined, bundle, DecodeConfig(p_thres=1.0, iterations=iterations)))
		self.assertLess(rtf[1], rtf[10])
