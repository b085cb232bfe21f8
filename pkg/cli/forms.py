# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import copy
from collections import OrderedDict

from django import forms
from django.conf import settings

from common_utils.exceptions import ConfigError
from common_utils.json_utils import read_json
from data.augment import AugmentConfig
from data.synthesis import SynthConfig
from decode.pipeline import DecodeConfig, MASK_SOURCES
from embed.smoothing import SmoothingConfig, MODES
from loss.objectives import LossConfig, SMOOTHING_MODES
from model.networks import EncoderConfig, ModelConfig, ARCHITECTURES, MATREG_PAIRS


MATREG_DEFAULT = 'default'

SELECT_BEST_LOSS = 'best_loss'
SELECT_BEST_ACCURACY = 'best_accuracy'
SELECT_MODES = (SELECT_BEST_LOSS, SELECT_BEST_ACCURACY)


def choices(values):
	return [(value, value) for value in values]


def probability_field():
	return forms.FloatField(min_value=0.0, max_value=1.0)


class SectionForm(forms.Form):
	"""
	Formulár jednej sekcie konfigurácie. Neznáme kľúče sú chybou.
	"""

	def __init__(self, data, *args, **kwargs):
		super(SectionForm, self).__init__(data, *args, **kwargs)
		self.unknown_keys = sorted(set(data) - set(self.fields))

	def clean(self):
		cleaned_data = super(SectionForm, self).clean()
		if self.unknown_keys:
			raise forms.ValidationError("unknown keys: %s" % ', '.join(self.unknown_keys))
		return cleaned_data

	def check_order(self, cleaned_data, low, high):
		if low in cleaned_data and high in cleaned_data and cleaned_data[low] > cleaned_data[high]:
			self.add_error(low, "must not exceed %s" % high)


class DataForm(SectionForm):
	num_chars = forms.IntegerField(min_value=3)
	num_pinyin = forms.IntegerField(min_value=2)
	num_eng_words = forms.IntegerField(min_value=2)
	train_size = forms.IntegerField(min_value=0)
	val_size = forms.IntegerField(min_value=0)
	test_size = forms.IntegerField(min_value=0)
	min_length = forms.IntegerField(min_value=1)
	max_length = forms.IntegerField(min_value=1)
	switch_prob = probability_field()
	mandarin_prob = probability_field()
	context_strength = probability_field()
	feature_dim = forms.IntegerField(min_value=1)
	min_duration = forms.IntegerField(min_value=1)
	max_duration = forms.IntegerField(min_value=1)
	noise = forms.FloatField(min_value=0.0)
	seed = forms.IntegerField(min_value=0)

	def clean(self):
		cleaned_data = super(DataForm, self).clean()
		if 'num_pinyin' in cleaned_data and 'num_chars' in cleaned_data and cleaned_data['num_pinyin'] >= cleaned_data['num_chars']:
			self.add_error('num_pinyin', "must be smaller than num_chars")
		self.check_order(cleaned_data, 'min_length', 'max_length')
		self.check_order(cleaned_data, 'min_duration', 'max_duration')
		return cleaned_data


class ModelForm(SectionForm):
	architecture = forms.ChoiceField(choices=choices(ARCHITECTURES))
	model_dim = forms.IntegerField(min_value=1)
	num_layers = forms.IntegerField(min_value=0)
	num_heads = forms.IntegerField(min_value=1)
	ff_dim = forms.IntegerField(min_value=1)
	subsample_factor = forms.IntegerField(min_value=1)
	dropout = forms.FloatField(min_value=0.0, max_value=0.99)
	num_cmlm_layers = forms.IntegerField(min_value=1)
	num_p2m_layers = forms.IntegerField(min_value=1)
	tie_ctc_embedding = forms.BooleanField(required=False)
	matreg_pair = forms.ChoiceField(choices=choices((MATREG_DEFAULT,) + MATREG_PAIRS))
	seed = forms.IntegerField(min_value=0)

	def clean(self):
		cleaned_data = super(ModelForm, self).clean()
		if cleaned_data.get('model_dim') and cleaned_data.get('num_heads') and cleaned_data['model_dim'] % cleaned_data['num_heads']:
			self.add_error('num_heads', "must divide model_dim")
		return cleaned_data


class LossForm(SectionForm):
	alpha = probability_field()
	beta = forms.FloatField(min_value=0.0)
	smoothing = forms.ChoiceField(choices=choices(SMOOTHING_MODES))
	epsilon = forms.FloatField(min_value=0.0, max_value=1.0)

	def clean_epsilon(self):
		epsilon = self.cleaned_data['epsilon']
		if not 0.0 < epsilon < 1.0:
			raise forms.ValidationError("must be in (0, 1)")
		return epsilon


class SmoothingForm(SectionForm):
	mode = forms.ChoiceField(choices=choices(MODES))
	tau = forms.FloatField(min_value=-1.0, max_value=1.0)
	n = forms.IntegerField(min_value=1)
	epsilon = forms.FloatField(min_value=0.0, max_value=1.0)
	same_language = forms.BooleanField(required=False)
	embedding_dim = forms.IntegerField(min_value=1)
	window = forms.IntegerField(min_value=1)
	vectors_path = forms.CharField(required=False)


class DecodeForm(SectionForm):
	p_thres = forms.FloatField(min_value=0.0, max_value=1.0)
	iterations = forms.IntegerField(min_value=1)
	mask_source = forms.ChoiceField(choices=choices(MASK_SOURCES))
	workers = forms.IntegerField(min_value=1)


class OptimForm(SectionForm):
	lr_factor = forms.FloatField(min_value=0.0)
	warmup_steps = forms.IntegerField(min_value=1)
	batch_size = forms.IntegerField(min_value=1)
	epochs = forms.IntegerField(min_value=1)
	grad_clip = forms.FloatField(min_value=0.0)
	select = forms.ChoiceField(choices=choices(SELECT_MODES))
	seed = forms.IntegerField(min_value=0)


class AugmentForm(SectionForm):
	num_time_masks = forms.IntegerField(min_value=0)
	time_width = forms.IntegerField(min_value=0)
	num_freq_masks = forms.IntegerField(min_value=0)
	freq_width = forms.IntegerField(min_value=0)


class PathsForm(SectionForm):
	data_dir = forms.CharField()
	exp_dir = forms.CharField()


SECTION_FORMS = OrderedDict([
	('data', DataForm),
	('model', ModelForm),
	('loss', LossForm),
	('smoothing', SmoothingForm),
	('decode', DecodeForm),
	('optim', OptimForm),
	('augment', AugmentForm),
	('paths', PathsForm),
])


class OptimConfig(object):
	def __init__(self, lr_factor=1.0, warmup_steps=400, batch_size=16, epochs=10, grad_clip=5.0, select=SELECT_BEST_LOSS, seed=0):
		self.lr_factor = float(lr_factor)
		self.warmup_steps = int(warmup_steps)
		self.batch_size = int(batch_size)
		self.epochs = int(epochs)
		self.grad_clip = float(grad_clip)
		self.select = select
		self.seed = int(seed)


class RunConfig(object):
	"""
	Overená konfigurácia behu: slovník sekcií a z neho odvodené
	konfiguračné objekty jednotlivých modulov.
	"""

	def __init__(self, sections):
		self.sections = sections

	def __getitem__(self, section):
		return self.sections[section]

	def to_dict(self):
		return copy.deepcopy(self.sections)

	@property
	def synth(self):
		return SynthConfig(**self.sections['data'])

	def model(self, input_dim=None, architecture=None):
		options = dict(self.sections['model'])
		architecture = architecture or options.pop('architecture')
		options.pop('architecture', None)
		matreg_pair = options.pop('matreg_pair')
		encoder = EncoderConfig(
			input_dim=input_dim or self.sections['data']['feature_dim'],
			model_dim=options.pop('model_dim'),
			num_layers=options.pop('num_layers'),
			num_heads=options.pop('num_heads'),
			ff_dim=options.pop('ff_dim'),
			subsample_factor=options.pop('subsample_factor'),
			dropout=options.pop('dropout'),
		)
		return ModelConfig(
			architecture,
			encoder,
			matreg_pair=None if matreg_pair == MATREG_DEFAULT else matreg_pair,
			**options
		)

	@property
	def loss(self):
		return LossConfig(**self.sections['loss'])

	@property
	def smoothing(self):
		options = self.sections['smoothing']
		return SmoothingConfig(options['mode'], options['tau'], options['n'], options['epsilon'], options['same_language'])

	def decode(self, architecture):
		options = self.sections['decode']
		return DecodeConfig(options['p_thres'], options['iterations'], architecture, options['mask_source'])

	@property
	def optim(self):
		return OptimConfig(**self.sections['optim'])

	@property
	def augment(self):
		return AugmentConfig(**self.sections['augment'])

	@property
	def paths(self):
		return self.sections['paths']


def validate_sections(raw):
	if not isinstance(raw, dict):
		raise ConfigError("configuration must be a JSON object", {'__all__': ["not an object"]})
	errors = OrderedDict()
	for section in sorted(set(raw) - set(SECTION_FORMS)):
		errors[section] = ["unknown section"]
	sections = OrderedDict()
	for section, form_class in SECTION_FORMS.items():
		data = raw.get(section, {})
		if not isinstance(data, dict):
			errors[section] = ["section must be a JSON object"]
			continue
		form = form_class(data)
		if not form.is_valid():
			for field, messages in form.errors.items():
				key = section if field == '__all__' else '%s.%s' % (section, field)
				errors[key] = list(messages)
			continue
		sections[section] = OrderedDict((name, form.cleaned_data[name]) for name in form.fields)
	if errors:
		raise ConfigError(
			"invalid configuration: %s" % '; '.join('%s: %s' % (key, ' '.join(messages)) for key, messages in errors.items()),
			errors
		)
	return RunConfig(sections)


def merge_sections(defaults, overrides):
	merged = copy.deepcopy(defaults)
	for section, values in overrides.items():
		if isinstance(values, dict) and isinstance(merged.get(section), dict):
			merged[section].update(values)
		else:
			merged[section] = values
	return merged


def load_run_config(path=None, seed=None, overrides=None):
	"""
	Predvolené hodnoty z nastavení, prekryté súborom a `overrides`.
	`seed` prepíše semienko dát, modelu aj trénovania.
	"""
	raw = copy.deepcopy(settings.CODESWITCH_DEFAULTS)
	if path is not None:
		try:
			loaded = read_json(path)
		except ValueError as e:
			raise ConfigError("%s: malformed JSON (%s)" % (path, e), {'__all__': [str(e)]})
		if not isinstance(loaded, dict):
			raise ConfigError("%s: configuration must be a JSON object" % path, {'__all__': ["not an object"]})
		raw = merge_sections(raw, loaded)
	if overrides:
		raw = merge_sections(raw, overrides)
	if seed is not None:
		for section in ('data', 'model', 'optim'):
			if isinstance(raw.get(section), dict):
				raw[section]['seed'] = seed
	return validate_sections(raw)
