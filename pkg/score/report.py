# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from collections import namedtuple, OrderedDict

from .alignment import align, edit_distance, SUB, DEL, INS
from .exceptions import ScoreError
from common_utils import logger
from common_utils.asciitable import NamedtupleTablePrinter
from vocab.pinyin import tokens_to_pinyin
from vocab.vocabulary import MAN_CHAR, PINYIN, ENG, SPECIAL, guess_tag, composition


LANGUAGES = (MAN_CHAR, PINYIN, ENG, SPECIAL)

# column order of the printed report
COLUMNS = OrderedDict([
	('ter', "TER"),
	('man', "Mandarin"),
	('man_pinyin', "Mandarin (pinyin)"),
	('eng', "English"),
	('sub', "Sub"),
	('del_all', "Del"),
	('del_man', "Del Mandarin"),
	('del_eng', "Del English"),
	('ins', "Ins"),
])


ReportRow = namedtuple('ReportRow', ['system'] + list(COLUMNS.keys()))


def empty_counts():
	return {SUB: 0, DEL: 0, INS: 0}


class UtteranceScore(object):
	"""
	Chyby jednej vety. Substitúcie a vypustenia sa pripisujú jazyku
	referenčného tokenu, vloženia jazyku tokenu hypotézy.
	"""

	def __init__(self, utt_id, ref_tokens, hyp_tokens, tag_of, pinyin_table=None):
		self.utt_id = utt_id
		self.ref_length = len(ref_tokens)
		self.ref_totals = dict((lang, 0) for lang in LANGUAGES)
		for token in ref_tokens:
			self.ref_totals[tag_of(token)] += 1
		self.counts = empty_counts()
		self.by_language = dict((lang, empty_counts()) for lang in LANGUAGES)
		self.homophone_subs = 0
		for op in align(ref_tokens, hyp_tokens):
			if op.kind not in self.counts:
				continue
			self.counts[op.kind] += 1
			lang = tag_of(op.hyp if op.kind == INS else op.ref)
			self.by_language[lang][op.kind] += 1
			if op.kind == SUB and pinyin_table is not None and self.is_homophone(op, tag_of, pinyin_table):
				self.homophone_subs += 1
		self.correct = list(ref_tokens) == list(hyp_tokens)

	@staticmethod
	def is_homophone(op, tag_of, pinyin_table):
		if tag_of(op.ref) != MAN_CHAR or tag_of(op.hyp) != MAN_CHAR:
			return False
		if op.ref not in pinyin_table or op.hyp not in pinyin_table:
			return False
		return pinyin_table[op.ref] == pinyin_table[op.hyp]

	@property
	def errors(self):
		return sum(self.counts.values())

	def language_errors(self, lang):
		return sum(self.by_language[lang].values())

	def column_counts(self):
		man = self.language_errors(MAN_CHAR)
		return OrderedDict([
			('ter', self.errors),
			('man', man),
			('man_pinyin', man - self.homophone_subs),
			('eng', self.language_errors(ENG)),
			('sub', self.counts[SUB]),
			('del_all', self.counts[DEL]),
			('del_man', self.by_language[MAN_CHAR][DEL]),
			('del_eng', self.by_language[ENG][DEL]),
			('ins', self.counts[INS]),
		])

	def normalized_columns(self):
		if self.ref_length == 0:
			return OrderedDict((key, 0.0) for key in COLUMNS)
		return OrderedDict((key, value / float(self.ref_length)) for key, value in self.column_counts().items())

	def to_dict(self):
		return {
			'utt_id': self.utt_id,
			'ref_length': self.ref_length,
			'correct': self.correct,
			'counts': self.column_counts(),
		}


class ErrorReport(object):
	def __init__(self, utterances, per=None, composition=None):
		self.utterances = list(utterances)
		self.counts = empty_counts()
		self.by_language = dict((lang, empty_counts()) for lang in LANGUAGES)
		self.ref_totals = dict((lang, 0) for lang in LANGUAGES)
		self.column_counts = OrderedDict((key, 0) for key in COLUMNS)
		for utt in self.utterances:
			for kind, value in utt.counts.items():
				self.counts[kind] += value
			for lang in LANGUAGES:
				self.ref_totals[lang] += utt.ref_totals[lang]
				for kind, value in utt.by_language[lang].items():
					self.by_language[lang][kind] += value
			for key, value in utt.column_counts().items():
				self.column_counts[key] += value
		self.ref_total = sum(self.ref_totals.values())
		if self.ref_total == 0:
			raise ScoreError("reference corpus has no tokens")
		self.per = per
		self.composition = composition

	@property
	def errors(self):
		return sum(self.counts.values())

	@property
	def ter(self):
		return self.errors / float(self.ref_total)

	def columns(self):
		"""
		Hodnoty stĺpcov v percentách z celkového počtu referenčných tokenov.
		"""
		return OrderedDict((key, 100.0 * value / self.ref_total) for key, value in self.column_counts.items())

	def flags(self):
		return OrderedDict((utt.utt_id, utt.correct) for utt in self.utterances)

	def to_dict(self):
		return {
			'ter': self.ter,
			'per': self.per,
			'ref_total': self.ref_total,
			'ref_totals': self.ref_totals,
			'counts': self.counts,
			'by_language': self.by_language,
			'columns': self.columns(),
			'composition': self.composition,
			'utterances': [utt.to_dict() for utt in self.utterances],
		}

	def row(self, system):
		return ReportRow(system=system, **self.columns())


def render_table(reports):
	"""
	Textová tabuľka, jeden riadok na systém. `reports` je zoznam dvojíc
	(názov systému, ErrorReport).
	"""
	rows = [report.row(system) for system, report in reports]
	return NamedtupleTablePrinter(rows, ReportRow).render()


def token_tagger(vocab=None):
	if vocab is None:
		return guess_tag
	return vocab.tag_of_token


def paired(refs, hyps):
	"""
	Dvojice (utt_id, referencia, hypotéza) v poradí referencií. Chýbajúca
	hypotéza je prázdna.
	"""
	missing = [utt_id for utt_id in refs if utt_id not in hyps]
	if missing:
		logger.warning("%d utterances have no hypothesis and count as deletions: %s", len(missing), ', '.join(missing[:10]))
	extra = [utt_id for utt_id in hyps if utt_id not in refs]
	if extra:
		logger.warning("ignoring %d hypotheses without reference", len(extra))
	return [(utt_id, list(ref), list(hyps.get(utt_id, []))) for utt_id, ref in refs.items()]


def pinyin_error_rate(pairs, pinyin_table):
	errors = 0
	total = 0
	for __, ref, hyp in pairs:
		errors += edit_distance(tokens_to_pinyin(ref, pinyin_table), tokens_to_pinyin(hyp, pinyin_table))
		total += len(ref)
	if total == 0:
		raise ScoreError("reference corpus has no tokens")
	return errors / float(total)


def per_score(refs, hyps, pinyin_table):
	return pinyin_error_rate(paired(refs, hyps), pinyin_table)


def score_corpus(refs, hyps, vocab=None, pinyin_table=None):
	"""
	`refs` a `hyps` sú slovníky utt_id -> zoznam tokenov.
	"""
	tag_of = token_tagger(vocab)
	pairs = paired(refs, hyps)
	utterances = [UtteranceScore(utt_id, ref, hyp, tag_of, pinyin_table) for utt_id, ref, hyp in pairs]
	per = pinyin_error_rate(pairs, pinyin_table) if pinyin_table is not None else None
	return ErrorReport(utterances, per=per, composition=composition(refs.values(), tag_of))
