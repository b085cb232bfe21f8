# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import glob
import os

from cli.commands import CodeSwitchCommand
from cli.training import CHECKPOINT_DIR
from model.checkpoint import average_checkpoints, save_checkpoint


class Command(CodeSwitchCommand):
	help = "Average the k checkpoints with the best validation accuracy"
	uses_config = False

	def add_arguments(self, parser):
		super(Command, self).add_arguments(parser)
		parser.add_argument('checkpoint_dir', help="experiment or checkpoint directory")
		parser.add_argument('-k', type=int, default=5)
		parser.add_argument('--out', help="output checkpoint (default <checkpoint_dir>/avg<k>.mccs)")

	def run(self, **options):
		directory = options['checkpoint_dir']
		if os.path.isdir(os.path.join(directory, CHECKPOINT_DIR)):
			directory = os.path.join(directory, CHECKPOINT_DIR)
		paths = sorted(glob.glob(os.path.join(directory, 'epoch*.mccs')))
		bundle = average_checkpoints(paths, options['k'])
		out = options.get('out') or os.path.join(options['checkpoint_dir'], 'avg%d.mccs' % options['k'])
		save_checkpoint(bundle, out, bundle.meta)
		self.stdout.write("averaged %d checkpoints into %s" % (len(bundle.meta['averaged']), out))
