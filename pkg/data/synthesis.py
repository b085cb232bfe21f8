# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from collections import OrderedDict

import numpy as np

from .exceptions import CorpusConfigError, SynthesisError
from vocab.pinyin import PinyinTable
from vocab.vocabulary import MAN_CHAR, ENG, is_cjk, detokenize


INITIALS = ('b', 'p', 'm', 'f', 'd', 't', 'n', 'l', 'g', 'k', 'h', 'j', 'q', 'x', 'zh', 'ch', 'sh', 'r', 'z', 'c', 's')
FINALS = ('a', 'o', 'e', 'i', 'u', 'ai', 'ei', 'ao', 'ou', 'an', 'en', 'ang', 'eng', 'ong')
SYLLABLES = tuple(initial + final for initial in INITIALS for final in FINALS)

ENGLISH_WORDS = (
	'actually', 'already', 'anyway', 'apple', 'basically', 'birthday', 'board', 'boss', 'business', 'cake',
	'call', 'camera', 'career', 'cheap', 'class', 'coffee', 'company', 'computer', 'cool', 'course',
	'cousin', 'cute', 'date', 'deadline', 'design', 'dinner', 'drama', 'driver', 'email', 'exam',
	'experience', 'facebook', 'family', 'final', 'friend', 'funny', 'game', 'good', 'group', 'happy',
	'holiday', 'hostel', 'idea', 'interview', 'just', 'lab', 'laptop', 'later', 'lecture', 'level',
	'lunch', 'major', 'manager', 'meeting', 'menu', 'mobile', 'movie', 'music', 'office', 'okay',
	'online', 'party', 'phone', 'photo', 'plan', 'point', 'present', 'problem', 'project', 'quiz',
	'really', 'report', 'research', 'salary', 'school', 'shopping', 'simple', 'so', 'sorry', 'staff',
	'story', 'student', 'subject', 'sure', 'team', 'test', 'thesis', 'ticket', 'travel', 'tutorial',
	'weekend', 'whatever', 'work', 'yeah',
)

CJK_START = 0x4E00
MAX_SUCCESSORS = 3


class SynthConfig(object):
	def __init__(
			self, num_chars=60, num_pinyin=24, num_eng_words=30, train_size=2000, val_size=200, test_size=200,
			min_length=3, max_length=10, switch_prob=0.2, mandarin_prob=0.6, context_strength=0.8,
			feature_dim=16, min_duration=4, max_duration=8, noise=0.1, seed=0): #pylint: disable=too-many-arguments
		self.num_chars = int(num_chars)
		self.num_pinyin = int(num_pinyin)
		self.num_eng_words = int(num_eng_words)
		self.train_size = int(train_size)
		self.val_size = int(val_size)
		self.test_size = int(test_size)
		self.min_length = int(min_length)
		self.max_length = int(max_length)
		self.switch_prob = float(switch_prob)
		self.mandarin_prob = float(mandarin_prob)
		self.context_strength = float(context_strength)
		self.feature_dim = int(feature_dim)
		self.min_duration = int(min_duration)
		self.max_duration = int(max_duration)
		self.noise = float(noise)
		self.seed = int(seed)
		self.validate()

	def validate(self):
		errors = OrderedDict()
		if not 2 <= self.num_pinyin < self.num_chars:
			errors['num_pinyin'] = "must be at least 2 and smaller than num_chars (%d)" % self.num_chars
		if self.num_pinyin > len(SYLLABLES):
			errors['num_pinyin'] = "at most %d pronunciation units are available" % len(SYLLABLES)
		available_words = len(english_candidates())
		if not 2 <= self.num_eng_words <= available_words:
			errors['num_eng_words'] = "must be between 2 and %d" % available_words
		if not 1 <= self.min_length <= self.max_length:
			errors['min_length'] = "length range %d..%d is empty" % (self.min_length, self.max_length)
		if not 1 <= self.min_duration <= self.max_duration:
			errors['min_duration'] = "duration range %d..%d is empty" % (self.min_duration, self.max_duration)
		for name in ('switch_prob', 'mandarin_prob', 'context_strength'):
			if not 0.0 <= getattr(self, name) <= 1.0:
				errors[name] = "must be a probability"
		if self.noise < 0:
			errors['noise'] = "must not be negative"
		if self.feature_dim < 1:
			errors['feature_dim'] = "must be at least 1"
		for name in ('train_size', 'val_size', 'test_size'):
			if getattr(self, name) < 0:
				errors[name] = "must not be negative"
		if errors:
			raise CorpusConfigError("invalid corpus configuration: %s" % ', '.join('%s %s' % item for item in errors.items()), errors)

	@property
	def split_sizes(self):
		return OrderedDict([('train', self.train_size), ('val', self.val_size), ('test', self.test_size)])

	def to_dict(self):
		return OrderedDict((name, getattr(self, name)) for name in (
			'num_chars', 'num_pinyin', 'num_eng_words', 'train_size', 'val_size', 'test_size',
			'min_length', 'max_length', 'switch_prob', 'mandarin_prob', 'context_strength',
			'feature_dim', 'min_duration', 'max_duration', 'noise', 'seed',
		))


def english_candidates():
	syllables = set(SYLLABLES)
	return [word for word in ENGLISH_WORDS if word not in syllables]


def pick(rng, items):
	return items[int(rng.integers(len(items)))]


class Inventory(object):
	"""
	Znaky, výslovnosti, anglické slová a akustické šablóny syntetického
	korpusu. Homofóny zdieľajú šablónu.
	"""

	def __init__(self, chars, table, eng_words, templates, successors):
		self.chars = list(chars)
		self.table = table
		self.eng_words = list(eng_words)
		self.templates = templates
		self.successors = successors

	@classmethod
	def build(cls, cfg, rng):
		pinyin = [SYLLABLES[idx] for idx in sorted(rng.choice(len(SYLLABLES), size=cfg.num_pinyin, replace=False))]
		candidates = english_candidates()
		eng_words = [candidates[idx] for idx in sorted(rng.choice(len(candidates), size=cfg.num_eng_words, replace=False))]
		chars = [chr(CJK_START + idx) for idx in range(cfg.num_chars)]
		order = rng.permutation(cfg.num_chars)
		# every pronunciation gets at least one character
		units = list(range(cfg.num_pinyin)) + [int(unit) for unit in rng.integers(0, cfg.num_pinyin, size=cfg.num_chars - cfg.num_pinyin)]
		assignment = dict((chars[int(char_idx)], pinyin[unit]) for char_idx, unit in zip(order, units))
		table = PinyinTable((char, assignment[char]) for char in chars)
		templates = OrderedDict()
		for unit in pinyin + eng_words:
			templates[unit] = rng.normal(size=cfg.feature_dim)
		successors = OrderedDict()
		for char in chars:
			others = [other for other in chars if table[other] != table[char]]
			chosen = rng.choice(len(others), size=min(MAX_SUCCESSORS, len(others)), replace=False)
			successors[char] = [others[int(idx)] for idx in chosen]
		return cls(chars, table, eng_words, templates, successors)

	def unit(self, token):
		if is_cjk(token):
			if token not in self.table:
				raise SynthesisError("character %r is not in the corpus inventory" % token)
			return self.table[token]
		if token not in self.templates:
			raise SynthesisError("word %r is not in the corpus inventory" % token)
		return token

	def template(self, token):
		return self.templates[self.unit(token)]

	def vocabulary_lines(self):
		return [' '.join(self.chars), ' '.join(self.eng_words)]

	def next_token(self, lang, previous, cfg, rng):
		if lang == ENG:
			return pick(rng, [word for word in self.eng_words if word != previous])
		if previous is not None and is_cjk(previous) and rng.random() < cfg.context_strength:
			return pick(rng, self.successors[previous])
		previous_unit = self.unit(previous) if previous is not None else None
		return pick(rng, [char for char in self.chars if self.table[char] != previous_unit])


def gen_transcript(inventory, cfg, rng):
	"""
	Jazyk sa mení Markovovým procesom s pravdepodobnosťou prepnutia na
	token. Susedné tokeny nikdy nemajú rovnakú výslovnosť.
	"""
	length = int(rng.integers(cfg.min_length, cfg.max_length + 1))
	lang = MAN_CHAR if rng.random() < cfg.mandarin_prob else ENG
	tokens = []
	previous = None
	for pos in range(length):
		if pos and rng.random() < cfg.switch_prob:
			lang = ENG if lang == MAN_CHAR else MAN_CHAR
		previous = inventory.next_token(lang, previous, cfg, rng)
		tokens.append(previous)
	return tokens


def gen_transcripts(inventory, cfg, rng, count, seen=None):
	"""
	`count` rôznych prepisov; `seen` obsahuje texty už použité v iných
	častiach korpusu.
	"""
	seen = set() if seen is None else seen
	transcripts = []
	attempts = 0
	max_attempts = 100 * count + 1000
	while len(transcripts) < count:
		attempts += 1
		if attempts > max_attempts:
			raise CorpusConfigError("inventory too small for %d distinct transcripts of length %d..%d" % (count, cfg.min_length, cfg.max_length))
		tokens = gen_transcript(inventory, cfg, rng)
		text = detokenize(tokens)
		if text in seen:
			continue
		seen.add(text)
		transcripts.append(tokens)
	return transcripts


def expected_composition(cfg):
	lengths = np.arange(cfg.min_length, cfg.max_length + 1)
	monolingual = float(np.mean((1.0 - cfg.switch_prob) ** (lengths - 1)))
	return OrderedDict([
		('mandarin', cfg.mandarin_prob * monolingual),
		('english', (1.0 - cfg.mandarin_prob) * monolingual),
		('code_switching', 1.0 - monolingual),
	])


def synth_features(tokens, inventory, cfg, rng):
	"""
	Každý token prispeje náhodným počtom kópií šablóny svojej výslovnosti
	s gaussovským šumom.
	"""
	blocks = []
	for token in tokens:
		template = inventory.template(token)
		duration = int(rng.integers(cfg.min_duration, cfg.max_duration + 1))
		block = np.tile(template, (duration, 1))
		if cfg.noise > 0:
			block = block + rng.normal(scale=cfg.noise, size=block.shape)
		blocks.append(block)
	if not blocks:
		return np.zeros((0, cfg.feature_dim))
	return np.concatenate(blocks)
