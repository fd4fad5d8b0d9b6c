"""
Command Line Interface
Subcommands for group data, Hilbert series, Schubert classes, pairings,
named checks, whole suites and the component cache
"""

import json
import logging
import sys
from typing import Dict, List, Optional

import click
from pydantic import ValidationError

from app.agents.cache_agent import CacheAgent
from app.agents.coxeter_agent import CoxeterAgent
from app.agents.report_exporter import ReportExporter
from app.agents.validator import BudgetExceededError, CoxeterInputError
from app.agents.verify_agent import VerifyAgent
from app.models.schemas import CliConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def _parse_index_list(value: str) -> List[int]:
    try:
        return [int(x) for x in value.replace(' ', '').split(',') if x]
    except ValueError:
        raise click.BadParameter(f"expected comma separated integers, got '{value}'")


def _parse_params(pairs) -> Dict:
    params = {}
    for pair in pairs:
        if '=' not in pair:
            raise click.BadParameter(f"expected key=value, got '{pair}'", param_hint='--param')
        key, raw = pair.split('=', 1)
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


class Session:
    """Resolved options of one invocation"""

    def __init__(self, config: CliConfig):
        self.config = config
        self.exporter = ReportExporter(config.output_format)

    def system(self, label: Optional[str] = None):
        return CoxeterAgent.resolve(label or self.config.group, self.config.matrix_file)

    def coxeter_agent(self) -> CoxeterAgent:
        return CoxeterAgent(budget=self.config.budget, cache_dir=self.config.cache_dir)

    def verify_agent(self) -> VerifyAgent:
        return VerifyAgent(budget=self.config.budget, cache_dir=self.config.cache_dir,
                           seed=self.config.seed, threads=self.config.threads,
                           max_degree=self.config.max_degree)


def _run(ctx: click.Context, action) -> None:
    """Run a subcommand body and map domain errors onto exit codes"""
    try:
        code = action(ctx.obj)
    except CoxeterInputError as e:
        raise click.UsageError(str(e), ctx=ctx)
    except BudgetExceededError as e:
        click.echo(f"Error: {e} (required {e.required}, budget {e.budget}); "
                   f"raise --budget or lower --max-degree", err=True)
        ctx.exit(EXIT_BUDGET)
    else:
        ctx.exit(code or EXIT_OK)


@click.group()
@click.option('--group', '-g', 'group', default=None, help='Type label such as A3, B2, H3, I2:7')
@click.option('--matrix-file', type=click.Path(), default=None, help="YAML file with 'rank' and 'matrix'")
@click.option('--max-degree', type=int, default=6, show_default=True, help='Highest degree to compute')
@click.option('--format', 'output_format', type=click.Choice(['pretty', 'json', 'tsv']), default='pretty',
              show_default=True, help='Output format')
@click.option('--cache-dir', type=click.Path(file_okay=False), default=None, help='Component cache directory')
@click.option('--threads', type=int, default=None, help='Worker processes (default: all cores)')
@click.option('--budget', type=int, default=None, help='Largest |R+|^n allowed for one component')
@click.option('--seed', type=int, default=0, show_default=True, help='Seed for randomised checks')
@click.option('-v', '--verbose', count=True, help='-v for INFO, -vv for DEBUG logging')
@click.pass_context
def cli(ctx, group, matrix_file, max_degree, output_format, cache_dir, threads, budget, seed, verbose):
    """Nichols-Woronowicz algebras of finite Coxeter groups"""
    _configure_logging(verbose)
    options = {
        'group': group,
        'matrix_file': matrix_file,
        'max_degree': max_degree,
        'output_format': output_format,
        'seed': seed,
    }
    if cache_dir is not None:
        options['cache_dir'] = cache_dir
    if threads is not None:
        options['threads'] = threads
    if budget is not None:
        options['budget'] = budget
    try:
        config = CliConfig(**options)
    except ValidationError as e:
        raise click.UsageError(e.errors()[0]['msg'], ctx=ctx)
    ctx.obj = Session(config)


@cli.command('group')
@click.argument('label', required=False)
@click.pass_context
def group_command(ctx, label):
    """Order, exponents, positive roots and orbits"""
    def action(session: Session):
        summary = session.coxeter_agent().summary(session.system(label))
        click.echo(session.exporter.summary(summary, f"COXETER GROUP {summary.label}"))
    _run(ctx, action)


@cli.command('roots')
@click.argument('label', required=False)
@click.pass_context
def roots_command(ctx, label):
    """Positive roots in simple-root coordinates"""
    def action(session: Session):
        system = session.system(label)
        rows = session.coxeter_agent().roots(system)
        click.echo(session.exporter.table(rows, f"POSITIVE ROOTS OF {system.display_name()}"))
    _run(ctx, action)


@cli.command('hilbert')
@click.argument('label', required=False)
@click.option('--quadratic', is_flag=True, help='Also compute the quadratic cover')
@click.pass_context
def hilbert_command(ctx, label, quadratic):
    """Dimensions of the graded components"""
    def action(session: Session):
        system = session.system(label)
        rows = session.coxeter_agent().hilbert(system, session.config.max_degree, quadratic)
        click.echo(session.exporter.hilbert_table(rows, f"HILBERT SERIES OF {system.display_name()}"))
    _run(ctx, action)


@cli.command('schubert')
@click.argument('label', required=False)
@click.pass_context
def schubert_command(ctx, label):
    """Schubert classes of every group element"""
    def action(session: Session):
        system = session.system(label)
        rows = session.coxeter_agent().schubert(system)
        click.echo(session.exporter.schubert_table(rows, f"SCHUBERT CLASSES OF {system.display_name()}"))
    _run(ctx, action)


@cli.command('pairing')
@click.argument('label', required=False)
@click.option('--left', required=True, help='Root indices of the first word, e.g. 1,2')
@click.option('--right', required=True, help='Root indices of the second word, e.g. 2,1')
@click.pass_context
def pairing_command(ctx, label, left, right):
    """Pair two words of positive roots by both routes"""
    left_word = _parse_index_list(left)
    right_word = _parse_index_list(right)

    def action(session: Session):
        result = session.coxeter_agent().pairing(session.system(label), left_word, right_word)
        click.echo(session.exporter.summary(result, f"PAIRING IN {result.group}"))
        return EXIT_OK if result.agree else EXIT_CHECK_FAILED
    _run(ctx, action)


@cli.command('verify')
@click.argument('check')
@click.argument('label', required=False)
@click.option('--m', 'm', type=int, default=None, help='Dihedral parameter for paths/nilcoxeter')
@click.option('--zero-orbit', 'zero_orbits', type=int, multiple=True, help='Orbit whose coefficient is 0')
@click.option('--param', 'extra', multiple=True, help='Extra parameter key=value (value parsed as JSON)')
@click.pass_context
def verify_command(ctx, check, label, m, zero_orbits, extra):
    """Run one named check"""
    params = _parse_params(extra)
    if m is not None:
        params['m'] = m
    if zero_orbits:
        params['zero_orbits'] = list(zero_orbits)

    def action(session: Session):
        agent = session.verify_agent()
        if check not in agent.CHECKS:
            raise click.UsageError(f"Unknown check '{check}'. Available: {', '.join(agent.CHECKS)}", ctx=ctx)
        system = None
        if check not in agent.DIHEDRAL_CHECKS:
            system = session.system(label)
        report = agent.run_check(check, system, **params)
        click.echo(session.exporter.reports_table([report], f"CHECK {check}"))
        return EXIT_OK if report.passed else EXIT_CHECK_FAILED
    _run(ctx, action)


@cli.command('suite')
@click.argument('label', required=False)
@click.pass_context
def suite_command(ctx, label):
    """Run every applicable check"""
    def action(session: Session):
        system = session.system(label)
        reports = session.verify_agent().run_suite(system)
        click.echo(session.exporter.reports_table(reports, f"SUITE FOR {system.display_name()}"))
        failed = [r for r in reports if not r.passed]
        if session.config.output_format == 'pretty':
            click.echo(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
        return EXIT_CHECK_FAILED if failed else EXIT_OK
    _run(ctx, action)


@cli.group('cache')
def cache_group():
    """Inspect or clear the component cache"""


@cache_group.command('list')
@click.pass_context
def cache_list(ctx):
    """List cached components"""
    session = ctx.obj
    result = CacheAgent(session.config.cache_dir).list_entries()
    if not result['success']:
        click.echo(f"Error: {result['error']}", err=True)
        ctx.exit(EXIT_CHECK_FAILED)
    click.echo(session.exporter.table(result['entries'], f"CACHE {result['cache_dir']}"))


@cache_group.command('info')
@click.argument('filename')
@click.pass_context
def cache_info(ctx, filename):
    """Details of one cache file"""
    session = ctx.obj
    result = CacheAgent(session.config.cache_dir).entry_info(filename)
    if not result['success']:
        raise click.UsageError(result['error'], ctx=ctx)
    click.echo(json.dumps(result, indent=2, default=str))


@cache_group.command('clear')
@click.confirmation_option(prompt='Delete every cached component?')
@click.pass_context
def cache_clear(ctx):
    """Delete every cached component"""
    result = CacheAgent(ctx.obj.config.cache_dir).clear()
    if not result['success']:
        click.echo(f"Error: {result['error']}", err=True)
        ctx.exit(EXIT_CHECK_FAILED)
    click.echo(f"{result['message']}: {result['removed']} files removed")


@cli.command('serve')
@click.option('--host', default='127.0.0.1', show_default=True)
@click.option('--port', default=8000, show_default=True, type=int)
def serve_command(host, port):
    """Start the read-only HTTP API"""
    import uvicorn
    from app.api.routes import app

    click.echo('=' * 60)
    click.echo('NICHOLS ALGEBRA API')
    click.echo('=' * 60)
    click.echo(f"Interactive docs: http://{host}:{port}/docs")
    uvicorn.run(app, host=host, port=port)


def main() -> None:
    cli(prog_name='nichols')


if __name__ == '__main__':
    main()
