# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io
import os
from collections import namedtuple, OrderedDict

import numpy as np

from .manifest import Manifest, ManifestRecord, write_manifest, write_features
from .synthesis import Inventory, gen_transcripts, synth_features, expected_composition
from common_utils import logger, ensure_dir
from common_utils.json_utils import write_json
from vocab.vocabulary import build_vocab, detokenize, composition


FEATS_DIR = 'feats'
CHAR_VOCAB_FILE = 'char_vocab.txt'
PINYIN_VOCAB_FILE = 'pinyin_vocab.txt'
PINYIN_TABLE_FILE = 'pinyin_table.txt'
TRAIN_TEXT_FILE = 'train_text.txt'
CORPUS_INFO_FILE = 'corpus.json'


GeneratedCorpus = namedtuple('GeneratedCorpus', ['out_dir', 'manifests', 'char_vocab', 'pinyin_vocab', 'pinyin_table', 'inventory'])


def manifest_path(out_dir, split):
	return os.path.join(out_dir, '%s.jsonl' % split)


def gen_split(split, transcripts, inventory, cfg, rng, out_dir):
	records = []
	for idx, tokens in enumerate(transcripts):
		features = synth_features(tokens, inventory, cfg, rng)
		feats_path = os.path.join(FEATS_DIR, '%s-%05d.mccs' % (split, idx))
		write_features(os.path.join(out_dir, feats_path), features)
		records.append(ManifestRecord(
			utt_id='%s-%05d' % (split, idx),
			text=detokenize(tokens),
			feats_path=feats_path,
			num_frames=int(features.shape[0]),
		))
	manifest = Manifest(records, root=out_dir)
	write_manifest(manifest, manifest_path(out_dir, split))
	return manifest


def gen_corpus(cfg, out_dir):
	"""
	Vygeneruje syntetický korpus: manifesty train/val/test, príznaky,
	slovníky, pinyinovú tabuľku a text trénovacej časti. Rovnaká
	konfigurácia dáva rovnaké súbory.
	"""
	rng = np.random.default_rng(cfg.seed)
	ensure_dir(os.path.join(out_dir, FEATS_DIR))
	inventory = Inventory.build(cfg, rng)
	char_vocab, pinyin_vocab = build_vocab(inventory.vocabulary_lines(), inventory.table)

	seen = set()
	manifests = OrderedDict()
	for split, size in cfg.split_sizes.items():
		transcripts = gen_transcripts(inventory, cfg, rng, size, seen)
		manifests[split] = gen_split(split, transcripts, inventory, cfg, rng, out_dir)
		logger.info("generated %d %s utterances", size, split)

	char_vocab.save(os.path.join(out_dir, CHAR_VOCAB_FILE))
	pinyin_vocab.save(os.path.join(out_dir, PINYIN_VOCAB_FILE))
	inventory.table.save(os.path.join(out_dir, PINYIN_TABLE_FILE))
	with io.open(os.path.join(out_dir, TRAIN_TEXT_FILE), 'w', encoding='utf-8') as fp:
		for text in manifests['train'].texts():
			fp.write(text + '\n')

	observed = composition(manifests['train'].tokens().values()) if len(manifests['train']) else None
	expected = expected_composition(cfg)
	write_json(os.path.join(out_dir, CORPUS_INFO_FILE), {
		'config': cfg.to_dict(),
		'expected_composition': expected,
		'train_composition': observed,
		'homophone_groups': sum(1 for chars in inventory.table.homophones().values() if len(chars) > 1),
	})
	if observed is not None:
		logger.info(
			"train composition: mandarin %.3f, english %.3f, code-switching %.3f (expected %.3f, %.3f, %.3f)",
			observed['mandarin'], observed['english'], observed['code_switching'],
			expected['mandarin'], expected['english'], expected['code_switching']
		)
	return GeneratedCorpus(out_dir, manifests, char_vocab, pinyin_vocab, inventory.table, inventory)
