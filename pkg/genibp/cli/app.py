#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" the ``genibp`` command line

subcommands sample, logprob, posterior, verify and transform each run as a
traitlets Application reading a shared RunConfig; ``--config file.json``
is loaded after the command line, so its values win over flags.

Examples
--------

>>> main(['transform', '--prior', 'beta:theta=1,beta=2', '--direction', 'to-halfline'])  # doctest: +ELLIPSIS
{...
 "round_trip_error": ...
}
0
>>> main(['sample', '--prior', 'beta:theta=1,beta=0.5', '--score', 'nb:r=1', '--customers', '2'])
3
>>> main(['frobnicate'])
2

"""
import io
import json
import os
import sys
from collections import OrderedDict

import numpy as np
import traitlets as trait
from traitlets.config import Application, Configurable
from traitlets.config.application import default_aliases, default_flags
from traitlets.config.loader import JSONFileConfigLoader

from genibp import __version__
from genibp.errors import (DomainError, ConfigurationError, ValidationError, ExplosivityError,
                           ResourceError)
from genibp.utils import load_json
from genibp.models.levy import transform_levy, is_infinite
from genibp.models.multivar import SBDPrior, MultiBuffetState
from genibp.calculus.quadrature import QuadratureSettings, settings
from genibp.buffet.sequential import sample_buffet
from genibp.buffet.condiments import mv_sample_buffet, mv_posterior_of
from genibp.buffet.matrix import write_json, write_csv, read_json, read_csv, export_matrix
from genibp.posterior.summary import posterior_of, log_marginal, explosivity_check
from genibp.verify.suites import SuiteSettings, SUITE_NAMES, run_suite, fresh_seed
from genibp.cli.specs import prior_from_spec, score_from_spec, to_spec

#: exit code of each error family, first match wins
EXIT_CODES = OrderedDict([
    (ExplosivityError, 3),
    (ResourceError, 4),
    (ValidationError, 2),
    (ConfigurationError, 2),
    (DomainError, 2),
    (trait.TraitError, 2),
    (OSError, 2),
])

SEED_VARIABLE = 'IBP_SEED'


def exit_code(err):
    """
    >>> exit_code(ExplosivityError('boom')), exit_code(ValidationError('bad')), exit_code(KeyError())
    (3, 2, None)
    """
    for klass, code in EXIT_CODES.items():
        if isinstance(err, klass):
            return code
    return None


def check_document(doc, schema):
    """ raise ValidationError when a document lacks a key its shipped
    schema requires

    Examples
    --------
    >>> check_document({'log_probability': 0.}, 'logprob')
    Traceback (most recent call last):
     ...
    genibp.errors.ValidationError: logprob document is incomplete: missing method; missing include_atoms; missing customers; missing dishes

    """
    import genibp.cli
    required = load_json(['schemas', '{0}.json'.format(schema)], genibp.cli).get('required', [])
    missing = ['missing {0}'.format(key) for key in required if key not in doc]
    if missing:
        raise ValidationError('{0} document is incomplete'.format(schema), missing)
    return doc


def dumps(doc):
    """ json with round-trip floats """
    return json.dumps(doc, indent=1, default=_jsonable)


def _jsonable(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    raise TypeError('{0!r} is not json serializable'.format(value))


class RunConfig(Configurable):
    """ everything that determines the output of one invocation """
    prior = trait.Unicode('', help="prior spec, e.g. 'beta:theta=1,beta=1'").tag(config=True)
    score = trait.Unicode('', help="score spec, e.g. 'poisson:b=1'").tag(config=True)
    customers = trait.Int(10, min=0, help='number of customers M').tag(config=True)
    q = trait.Int(None, allow_none=True, help='number of condiments').tag(config=True)
    seed = trait.Int(None, allow_none=True, help='root seed (default: $IBP_SEED)').tag(config=True)
    output = trait.Unicode('', help='output path, stdout when empty').tag(config=True)
    format = trait.Enum(['json', 'csv'], default_value='json', help='feature matrix format').tag(config=True)
    input = trait.Unicode('', help='feature matrix to read').tag(config=True)
    method = trait.Enum(['auto', 'closed', 'quadrature'], default_value='auto',
                        help='closed forms or quadrature').tag(config=True)
    include_atoms = trait.Bool(False, help='joint density including the atoms').tag(config=True)
    allow_explosive = trait.Bool(False, help='sample even when E[Z] is infinite').tag(config=True)
    suite = trait.Enum(SUITE_NAMES, default_value='all', help='verification suite').tag(config=True)
    budget = trait.Int(None, allow_none=True, help='suite budget').tag(config=True)
    fresh_seed = trait.Bool(False, help='verify with a seed drawn from the OS').tag(config=True)
    workers = trait.Int(None, allow_none=True, help='verification threads').tag(config=True)
    direction = trait.Enum(['auto', 'to-halfline', 'to-unit'], default_value='auto',
                           help='transform direction').tag(config=True)

    def to_dict(self):
        return {name: getattr(self, name) for name in sorted(self.trait_names(config=True))}


class BaseCommand(Application):
    """ shared option parsing, configuration and error handling

    Examples
    --------
    >>> argv = ['--prior', 'gamma:theta=2,beta=1', '--score', 'poisson:b=1',
    ...         '--customers', '3', '--seed', '5', '--condiments', '2', '--include-atoms']
    >>> for name, klass in SUBCOMMANDS.items():
    ...     command = klass()
    ...     command.initialize(argv)
    ...     config = command.run_config
    ...     print(name, config.prior, config.score, config.customers, config.seed, config.q,
    ...           config.include_atoms)
    sample gamma:theta=2,beta=1 poisson:b=1 3 5 2 True
    logprob gamma:theta=2,beta=1 poisson:b=1 3 5 2 True
    posterior gamma:theta=2,beta=1 poisson:b=1 3 5 2 True
    verify gamma:theta=2,beta=1 poisson:b=1 3 5 2 True
    transform gamma:theta=2,beta=1 poisson:b=1 3 5 2 True
    >>> command = SampleCommand()
    >>> command.initialize(['-q', '4'])
    >>> command.run_config.q, command.run_config.customers, command.run_config.include_atoms
    (4, 10, False)

    """
    version = __version__
    classes = [RunConfig, QuadratureSettings, SuiteSettings]
    config_file = trait.Unicode('', help='JSON config file, applied over the command line').tag(config=True)

    aliases = dict(default_aliases)
    aliases.update({
        'config': 'BaseCommand.config_file',
        'prior': 'RunConfig.prior',
        'score': 'RunConfig.score',
        'customers': 'RunConfig.customers',
        'q': 'RunConfig.q',
        'condiments': 'RunConfig.q',
        'seed': 'RunConfig.seed',
        'out': 'RunConfig.output',
        'output': 'RunConfig.output',
        'format': 'RunConfig.format',
        'in': 'RunConfig.input',
        'method': 'RunConfig.method',
        'suite': 'RunConfig.suite',
        'budget': 'RunConfig.budget',
        'workers': 'RunConfig.workers',
        'direction': 'RunConfig.direction',
    })
    flags = dict(default_flags)
    flags.update({
        'include-atoms': ({'RunConfig': {'include_atoms': True}}, 'joint density with Uniform[0,1) atoms'),
        'allow-explosive': ({'RunConfig': {'allow_explosive': True}}, 'sample explosive priors'),
        'fresh-seed': ({'RunConfig': {'fresh_seed': True}}, 'verify with an OS-drawn seed'),
    })

    def initialize(self, argv=None):
        self.parse_command_line(argv)
        if self.config_file:
            path, name = os.path.split(os.path.abspath(self.config_file))
            if not os.path.exists(self.config_file):
                raise ConfigurationError('config file {0} does not exist'.format(self.config_file))
            self.update_config(JSONFileConfigLoader(name, path).load_config())
        settings().update_config(self.config)
        self.run_config = RunConfig(parent=self)

    def resolve_seed(self):
        """ the configured seed, $IBP_SEED, or a fresh one """
        seed = self.run_config.seed
        if seed is None and os.environ.get(SEED_VARIABLE):
            try:
                seed = int(os.environ[SEED_VARIABLE])
            except ValueError:
                raise ConfigurationError('{0}={1!r} is not an integer'.format(
                    SEED_VARIABLE, os.environ[SEED_VARIABLE]))
        if seed is None:
            seed = fresh_seed()
            self.log.info('no seed given, drew %d', seed)
        return seed

    def model(self, required=True):
        """ (prior, score) from the specs, or (None, None) if unset """
        config = self.run_config
        if not (config.prior and config.score):
            if required:
                raise ConfigurationError('--prior and --score are required')
            if config.prior or config.score:
                raise ConfigurationError('--prior and --score go together')
            return None, None
        prior = prior_from_spec(config.prior)
        q = config.q if config.q is not None else (prior.q if isinstance(prior, SBDPrior) else None)
        return prior, score_from_spec(config.score, q)

    def read_state(self):
        config = self.run_config
        if not config.input:
            raise ConfigurationError('--in is required')
        prior, score = self.model(required=False)
        if config.input.endswith('.csv'):
            if prior is None:
                raise ConfigurationError('csv matrices need --prior and --score')
            return read_csv(config.input, prior, score)
        return read_json(config.input, prior, score)

    def emit(self, text):
        """ write to --out, or print """
        if self.run_config.output:
            with io.open(self.run_config.output, 'w') as f:
                f.write(text if text.endswith('\n') else text + '\n')
            self.log.info('wrote %s', self.run_config.output)
        else:
            print(text)

    def run(self):
        raise NotImplementedError

    def start(self):
        return self.run()


class SampleCommand(BaseCommand):
    name = 'genibp-sample'
    description = 'sample a feature matrix from the sequential buffet'

    def run(self):
        config = self.run_config
        prior, score = self.model()
        seed = self.resolve_seed()
        if isinstance(prior, SBDPrior):
            state = mv_sample_buffet(prior, score, config.customers, seed=seed)
        else:
            if not config.allow_explosive:
                mean = explosivity_check(prior, score)
                if is_infinite(mean):
                    raise ExplosivityError(
                        'the expected total score of a customer is infinite for {0} with {1}: '
                        'the buffet is explosive ({2}); pass --allow-explosive to sample anyway'.format(
                            to_spec(prior), to_spec(score), mean.reason), diagnosis=mean.reason)
            state = sample_buffet(prior, score, config.customers, seed=seed)
        if config.format == 'csv':
            text = write_csv(state)
        else:
            text = write_json(state)
            check_document(export_matrix(state), 'feature_matrix')
        summary = state.summary()
        summary['seed'] = seed
        if config.output:
            self.emit(text)
            print(dumps(summary))
        else:
            self.log.info('sample summary: %s', json.dumps(summary))
            self.emit(text.rstrip('\n'))
        return 0


class LogprobCommand(BaseCommand):
    name = 'genibp-logprob'
    description = 'log probability of the score pattern of a feature matrix'

    def run(self):
        config = self.run_config
        state = self.read_state()
        if isinstance(state, MultiBuffetState):
            raise ConfigurationError('log probabilities of condiment matrices are not available')
        value = log_marginal(state, config.method, config.include_atoms)
        doc = {'log_probability': value, 'method': config.method, 'include_atoms': config.include_atoms,
               'customers': state.num_customers, 'dishes': state.num_dishes}
        self.emit(dumps(check_document(doc, 'logprob')))
        return 0


class PosteriorCommand(BaseCommand):
    name = 'genibp-posterior'
    description = 'tilted prior and per-dish jump laws of a feature matrix'

    def run(self):
        state = self.read_state()
        if isinstance(state, MultiBuffetState):
            doc = mv_posterior_of(state).to_dict()
        else:
            doc = posterior_of(state, self.run_config.method).to_dict()
            doc['expected_total_score'] = explosivity_check(state.prior, state.score_model)
        doc['customers'] = state.num_customers
        self.emit(dumps(check_document(doc, 'posterior_summary')))
        return 0


class VerifyCommand(BaseCommand):
    name = 'genibp-verify'
    description = 'run a statistical verification suite; exits 1 on failure'

    def run(self):
        config = self.run_config
        if config.fresh_seed:
            seed = None
        elif config.seed is None and not os.environ.get(SEED_VARIABLE):
            seed = 42
        else:
            seed = self.resolve_seed()
        report = run_suite(config.suite, seed=seed, budget=config.budget, workers=config.workers,
                           settings=SuiteSettings(parent=self))
        doc = check_document(report.to_dict(), 'test_report')
        print(report.table())
        if config.output:
            self.emit(dumps(doc))
        else:
            print(dumps(doc))
        return 0 if report.passed else 1


class TransformCommand(BaseCommand):
    name = 'genibp-transform'
    description = 'map a Lévy density between (0,1) and (0,inf)'

    def run(self):
        config = self.run_config
        if not config.prior:
            raise ConfigurationError('--prior is required')
        prior = prior_from_spec(config.prior)
        if isinstance(prior, SBDPrior):
            raise ConfigurationError('only univariate densities can be transformed')
        wanted = {'to-halfline': 'UnitInterval', 'to-unit': 'PositiveHalfLine'}.get(config.direction)
        if wanted is not None and prior.support != wanted:
            raise ConfigurationError('{0} needs a density on the {1}, {2} lives on the {3}'.format(
                config.direction, wanted, to_spec(prior), prior.support))
        image = transform_levy(prior)
        if prior.support == 'UnitInterval':
            grid = np.linspace(0.01, 0.99, 99)
        else:
            grid = np.geomspace(1e-3, 10., 99)
        twice = transform_levy(image)
        error = float(np.max(np.abs(twice.density(grid) / prior.density(grid) - 1.)))
        doc = {'input': prior.to_dict(), 'output': image.to_dict(), 'round_trip_error': error}
        self.emit(dumps(check_document(doc, 'levy_density')))
        return 0


SUBCOMMANDS = OrderedDict([
    ('sample', SampleCommand),
    ('logprob', LogprobCommand),
    ('posterior', PosteriorCommand),
    ('verify', VerifyCommand),
    ('transform', TransformCommand),
])


def usage():
    lines = ['usage: genibp {0} [options]'.format('|'.join(SUBCOMMANDS)), '']
    for name, klass in SUBCOMMANDS.items():
        lines.append('  {0:<10} {1}'.format(name, klass.description))
    lines.append('')
    lines.append("run 'genibp <subcommand> --help' for the options")
    return '\n'.join(lines)


def main(argv=None):
    """ run a subcommand and return its exit code """
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ('-h', '--help', 'help'):
        print(usage())
        return 0 if argv else 2
    if argv[0] not in SUBCOMMANDS:
        sys.stderr.write('genibp: unknown subcommand {0!r}\n{1}\n'.format(argv[0], usage()))
        return 2
    app = SUBCOMMANDS[argv[0]]()
    try:
        app.initialize(argv[1:])
        return app.start()
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else 2
    except Exception as err:
        code = exit_code(err)
        if code is None:
            raise
        app.log.error('%s', err)
        if getattr(err, 'diagnosis', ''):
            app.log.error('diagnosis: %s', err.diagnosis)
        return code
