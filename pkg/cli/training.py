# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io
import math
import os
import shutil
from collections import namedtuple, OrderedDict

import numpy as np
from django.utils import timezone

from .exceptions import TrainingDivergedError
from .forms import SELECT_BEST_LOSS
from common_utils import logger, ensure_dir
from common_utils.exceptions import ConfigError
from common_utils.json_utils import append_json_line
from data.augment import augment
from decode.pipeline import decode_corpus
from embed.smoothing import SmoothingTable
from embed.vectors import load_vectors, train_ppmi_svd
from loss.ctc import ctc_loss
from loss.exceptions import CTCInfeasibleError, CTCNumericError
from loss.masking import sample_mask, apply_mask
from loss.objectives import LossConfig, ConventionalSmoothing, masked_ce, masked_accuracy, matreg_loss, combined_loss
from model.checkpoint import save_checkpoint
from model.networks import CTC_ONLY
from model.optim import Adam, NoamSchedule, clip_grad_norm, scale_grads
from score.alignment import SUB, DEL
from score.report import score_corpus
from tensor.exceptions import NonFiniteError
from vocab.pinyin import tokens_to_pinyin


CHECKPOINT_DIR = 'checkpoints'
BEST_CHECKPOINT = 'best.mccs'
TRAIN_LOG = 'train_log.jsonl'

# validation masks are drawn from their own stream so epochs compare
VALIDATION_SEED_OFFSET = 7919


TrainingItem = namedtuple('TrainingItem', ['utt_id', 'features', 'tokens'])
Evaluation = namedtuple('Evaluation', ['loss', 'accuracy', 'ter', 'report'])
EpochResult = namedtuple('EpochResult', ['epoch', 'train_loss', 'val_loss', 'val_accuracy', 'val_ter', 'checkpoint'])


def manifest_items(manifest, limit=None):
	records = list(manifest)[:limit] if limit else list(manifest)
	tokens = manifest.tokens()
	return [TrainingItem(record.utt_id, manifest.load_features(record), tokens[record.utt_id]) for record in records]


def effective_loss_config(cfg, architecture):
	if architecture == CTC_ONLY:
		return LossConfig(alpha=1.0, beta=0.0, smoothing=cfg.smoothing, epsilon=cfg.epsilon)
	return cfg


def checkpoint_path(out_dir, epoch):
	return os.path.join(out_dir, CHECKPOINT_DIR, 'epoch%03d.mccs' % epoch)


class Trainer(object):
	"""
	Trénovanie po vetách s akumuláciou gradientu v rámci dávky. Maska pre
	P2M aj CMLM sa losuje pre každú vetu zvlášť.
	"""

	def __init__(self, bundle, loss_cfg, optim_cfg, decode_cfg, out_dir, smooth=None, augment_cfg=None, pinyin_table=None, workers=1):
		if bundle.ctc_vocab is not bundle.char_vocab and pinyin_table is None:
			raise ConfigError("architecture %s needs a pinyin table" % bundle.architecture)
		self.bundle = bundle
		self.loss_cfg = effective_loss_config(loss_cfg, bundle.architecture)
		self.optim_cfg = optim_cfg
		self.decode_cfg = decode_cfg
		self.out_dir = out_dir
		self.smooth = smooth if smooth is not None else ConventionalSmoothing(
			self.loss_cfg.epsilon,
			len(bundle.char_vocab),
			excluded=(bundle.char_vocab.mask, bundle.char_vocab.blank)
		)
		self.augment_cfg = augment_cfg if augment_cfg is not None and augment_cfg.enabled else None
		self.pinyin_table = pinyin_table
		self.workers = workers
		self.rng = np.random.default_rng(optim_cfg.seed)
		self.params = bundle.parameters()
		schedule = NoamSchedule(bundle.config.encoder.model_dim, optim_cfg.warmup_steps, optim_cfg.lr_factor)
		self.optimizer = Adam(self.params, schedule)
		self.batch_count = 0

	@property
	def log_path(self):
		return os.path.join(self.out_dir, TRAIN_LOG)

	def reference_ids(self, tokens):
		bundle = self.bundle
		char_ids = bundle.char_vocab.encode(tokens)
		if bundle.ctc_vocab is bundle.char_vocab:
			return char_ids, char_ids
		return bundle.ctc_vocab.encode(tokens_to_pinyin(tokens, self.pinyin_table)), char_ids

	def utterance_loss(self, features, tokens, rng, dropout_rng=None):
		"""
		Kombinovaná strata jednej vety a počet správne predikovaných
		maskovaných znakov CMLM.
		"""
		bundle = self.bundle
		ctc_ids, char_ids = self.reference_ids(tokens)
		hidden, log_probs = bundle.encoder_forward(features, dropout_rng)
		ctc_nll = ctc_loss(log_probs, ctc_ids, bundle.ctc_vocab.blank)
		p2m_nll = None
		cmlm_nll = None
		matreg = None
		correct, total = 0, 0
		if bundle.p2m is not None:
			positions = sample_mask(len(ctc_ids), rng)
			logits = bundle.p2m_forward(apply_mask(ctc_ids, positions, bundle.ctc_vocab.mask), hidden, dropout_rng)
			p2m_nll = masked_ce(logits, char_ids, positions, self.smooth)
		if bundle.cmlm is not None:
			positions = sample_mask(len(char_ids), rng)
			logits = bundle.cmlm_forward(apply_mask(char_ids, positions, bundle.char_vocab.mask), hidden, dropout_rng)
			cmlm_nll = masked_ce(logits, char_ids, positions, self.smooth)
			correct, total = masked_accuracy(logits, char_ids, positions)
		if self.loss_cfg.beta > 0.0:
			pair = bundle.matreg_pair()
			if pair is not None:
				matreg = matreg_loss(*pair)
		return combined_loss(ctc_nll, p2m_nll, cmlm_nll, matreg, self.loss_cfg), (correct, total)

	def train_batch(self, batch):
		self.batch_count += 1
		batch_id = self.batch_count
		self.optimizer.zero_grad()
		losses = []
		for item in batch:
			if not item.tokens:
				continue
			features = item.features
			if self.augment_cfg is not None:
				features = augment(features, self.augment_cfg, self.rng)
			try:
				loss, __ = self.utterance_loss(features, item.tokens, self.rng, self.rng)
			except CTCInfeasibleError as e:
				logger.warning("skipping %s: %s", item.utt_id, e)
				continue
			except (NonFiniteError, CTCNumericError) as e:
				raise TrainingDivergedError(batch_id, "%s (utterance %s)" % (e, item.utt_id))
			value = loss.item()
			if not math.isfinite(value):
				raise TrainingDivergedError(batch_id, "loss is %r (utterance %s)" % (value, item.utt_id))
			loss.backward()
			losses.append(value)
		if not losses:
			return None
		scale_grads(self.params, 1.0 / len(losses))
		norm = clip_grad_norm(self.params, self.optim_cfg.grad_clip)
		if not math.isfinite(norm):
			raise TrainingDivergedError(batch_id, "gradient norm is %r" % norm)
		self.optimizer.step()
		return float(np.mean(losses))

	def train_epoch(self, items):
		order = self.rng.permutation(len(items))
		size = self.optim_cfg.batch_size
		losses = []
		for start in range(0, len(order), size):
			loss = self.train_batch([items[int(idx)] for idx in order[start:start + size]])
			if loss is not None:
				losses.append(loss)
		return float(np.mean(losses)) if losses else None

	def evaluate(self, items):
		"""
		Validačná strata (bez dropoutu, s pevnými maskami), presnosť
		maskovaných tokenov a TER dekódovania.
		"""
		rng = np.random.default_rng(self.optim_cfg.seed + VALIDATION_SEED_OFFSET)
		losses = []
		correct, total = 0, 0
		for item in items:
			if not item.tokens:
				continue
			try:
				loss, (item_correct, item_total) = self.utterance_loss(item.features, item.tokens, rng)
			except CTCInfeasibleError as e:
				logger.warning("skipping %s in validation: %s", item.utt_id, e)
				continue
			losses.append(loss.item())
			correct += item_correct
			total += item_total
		hypotheses = decode_corpus([(item.utt_id, item.features) for item in items], self.bundle, self.decode_cfg, workers=self.workers)
		refs = OrderedDict((item.utt_id, item.tokens) for item in items)
		report = score_corpus(refs, dict((hyp.utt_id, hyp.tokens) for hyp in hypotheses), vocab=self.bundle.char_vocab)
		if total:
			accuracy = correct / float(total)
		else:
			# token accuracy of the decoded output when there is no CMLM
			accuracy = (report.ref_total - report.counts[SUB] - report.counts[DEL]) / float(report.ref_total)
		return Evaluation(float(np.mean(losses)) if losses else None, accuracy, report.ter, report)

	def fit(self, train_items, val_items, epochs=None):
		epochs = epochs or self.optim_cfg.epochs
		ensure_dir(os.path.join(self.out_dir, CHECKPOINT_DIR))
		if os.path.exists(self.log_path):
			os.remove(self.log_path)
		results = []
		for epoch in range(1, epochs + 1):
			train_loss = self.train_epoch(train_items)
			evaluation = self.evaluate(val_items)
			path = checkpoint_path(self.out_dir, epoch)
			meta = OrderedDict([
				('epoch', epoch),
				('train_loss', train_loss),
				('val_loss', evaluation.loss),
				('val_accuracy', evaluation.accuracy),
				('val_ter', evaluation.ter),
				('architecture', self.bundle.architecture),
				('steps', self.optimizer.step_count),
			])
			save_checkpoint(self.bundle, path, meta)
			record = OrderedDict(meta)
			record['lr'] = self.optimizer.lr
			record['time'] = timezone.now()
			append_json_line(self.log_path, record)
			logger.info(
				"epoch %d: train loss %s, val loss %s, val accuracy %.3f, val TER %.3f",
				epoch, format_loss(train_loss), format_loss(evaluation.loss), evaluation.accuracy, evaluation.ter
			)
			results.append(EpochResult(epoch, train_loss, evaluation.loss, evaluation.accuracy, evaluation.ter, path))
		best = select_best(results, self.optim_cfg.select)
		shutil.copyfile(best.checkpoint, os.path.join(self.out_dir, BEST_CHECKPOINT))
		logger.info("selected epoch %d as %s", best.epoch, BEST_CHECKPOINT)
		return results


def format_loss(value):
	return 'n/a' if value is None else '%.4f' % value


def select_best(results, mode=SELECT_BEST_LOSS):
	"""
	Pri zhode vyhráva skoršia epocha.
	"""
	if mode == SELECT_BEST_LOSS:
		key = lambda result: (result.val_loss if result.val_loss is not None else math.inf, result.epoch)
	else:
		key = lambda result: (-result.val_accuracy, result.epoch)
	return min(results, key=key)


def embedding_smoothing(options, smoothing_cfg, char_vocab, train_text_path):
	"""
	Vyhladenie podľa podobnosti vektorov: vektory zo súboru `vectors_path`,
	inak natrénované PPMI+SVD na texte trénovacej časti.
	"""
	if options['vectors_path']:
		embedding = load_vectors(options['vectors_path'], char_vocab)
	else:
		with io.open(train_text_path, 'r', encoding='utf-8') as fp:
			lines = [line.strip() for line in fp if line.strip()]
		embedding = train_ppmi_svd(lines, char_vocab, options['embedding_dim'], options['window'])
	logger.info("embedding covers %.1f%% of the character vocabulary", 100.0 * embedding.coverage)
	return SmoothingTable(embedding, smoothing_cfg)
