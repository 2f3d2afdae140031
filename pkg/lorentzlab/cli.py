''' Command line front end.

    python -m lorentzlab norm "u_radial(r=1,alpha=1,n=2,p=2)" --p 2 --q inf
    python -m lorentzlab witness --p 2 --q1 2 --q2 inf
    python -m lorentzlab verify morrey1d --seed 7 --out results
    python -m lorentzlab sweep u_radial --grid "r=1;n=2;p=2;alpha=0.25,0.5,1;q=1,2,4,inf"
    python -m lorentzlab gallery

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 internal error.
Results go to stdout (or --out), logs to stderr (or --log-file).
'''
import argparse
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
import io
import logging
import os
import sys

import pandas as pd

from . import util
from .exceptions import DomainError, LorentzLabError, PreconditionError
from .foundations import ExponentPair, as_exponent
from .gallery import ClosedFormCatalog, parse_item
from .lab import (
    SUITES, Suite, counts_line, format_pretty, jsonl_lines, parse_grid, summary_frame, sweep,
    witness_strict_inclusion, write_csv, write_jsonl,
)
from .norms import DEFAULT_QUAD, NormKind, QuadratureSpec

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
FORMATS = ('json', 'csv', 'pretty')
DEFAULT_FORMATS = {'norm': 'pretty', 'witness': 'pretty', 'verify': 'pretty', 'sweep': 'csv',
                   'gallery': 'pretty'}


@dataclass
class RunConfig:
    ''' Everything a command needs, as parsed from the command line.'''
    command: str
    item: str = None
    p: float = None
    q: object = None
    q1: object = None
    q2: object = None
    kind: str = 'quasi'
    gradient: bool = False
    suite: str = None
    family: str = None
    grid: dict = None
    functional: str = 'norm'
    seed: int = None
    parallel: bool = False
    n_jobs: int = -1
    out: str = None
    format: str = 'pretty'
    timestamp: bool = True
    quad: dict = field(default_factory=DEFAULT_QUAD.to_dict)

    def to_dict(self):
        return util.to_jsonable(asdict(self))

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        for key in ('q', 'q1', 'q2'):
            if data.get(key) is not None:
                data[key] = as_exponent(data[key])
        if data.get('grid') is not None:
            data['grid'] = {key: [float(as_exponent(value)) for value in values]
                            for key, values in data['grid'].items()}
        return cls(**data)

    @classmethod
    def from_args(cls, args):
        quad = QuadratureSpec(rel_tol=args.quad_rel_tol, abs_tol=args.quad_abs_tol,
                              max_subdivisions=args.quad_max_subdivisions)
        config = cls(command=args.command, seed=args.seed, out=args.out,
                     format=args.format or DEFAULT_FORMATS[args.command],
                     timestamp=not args.no_timestamp, quad=quad.to_dict())
        if args.command == 'norm':
            config.item, config.p, config.kind, config.gradient = args.item, args.p, args.kind, args.gradient
            config.q = as_exponent(args.q)
        elif args.command == 'witness':
            config.p, config.q1, config.q2 = args.p, as_exponent(args.q1), as_exponent(args.q2)
        elif args.command == 'verify':
            config.suite, config.parallel, config.n_jobs = args.suite, args.parallel, args.n_jobs
        elif args.command == 'sweep':
            config.family, config.functional = args.family, args.functional
            config.grid = parse_grid(args.grid)
        return config

    @property
    def quad_spec(self):
        return QuadratureSpec.from_dict(self.quad)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help=f'Base seed (the {util.SEED_ENV_VAR} environment variable wins).')
    common.add_argument('--out', default=None,
                        help='Output file; a directory for verify. Default: stdout only.')
    common.add_argument('--format', choices=FORMATS, default=None)
    common.add_argument('--no-timestamp', action='store_true',
                        help='Leave the timestamp out of JSON output.')
    common.add_argument('--verbose', action='store_true', help='Log at DEBUG level.')
    common.add_argument('--log-file', default=None, help='Append logs to this file instead of stderr.')
    common.add_argument('--quad-rel-tol', type=float, default=DEFAULT_QUAD.rel_tol)
    common.add_argument('--quad-abs-tol', type=float, default=DEFAULT_QUAD.abs_tol)
    common.add_argument('--quad-max-subdivisions', type=int, default=DEFAULT_QUAD.max_subdivisions)

    parser = argparse.ArgumentParser(prog='lorentzlab',
                                     description='Lorentz and Sobolev-Lorentz norms and inequality checks.')
    commands = parser.add_subparsers(dest='command', required=True)

    norm = commands.add_parser('norm', parents=[common], help='Evaluate ||u||_{p,q} of a gallery item.')
    norm.add_argument('item', help='Gallery id, e.g. "u_radial(r=1,alpha=1,n=2,p=2)".')
    norm.add_argument('--p', type=float, default=None, help="Primary exponent (default: the item's p).")
    norm.add_argument('--q', default='inf', help="Secondary exponent, 'inf' allowed.")
    norm.add_argument('--kind', choices=('quasi', 'starstar'), default='quasi')
    norm.add_argument('--gradient', action='store_true', help='Norm of |grad u| instead of |u|.')

    witness = commands.add_parser('witness', parents=[common],
                                  help='Witnesses of L^{p,q1} strictly inside L^{p,q2}.')
    witness.add_argument('--p', type=float, required=True)
    witness.add_argument('--q1', required=True)
    witness.add_argument('--q2', required=True)

    verify = commands.add_parser('verify', parents=[common], help='Run a verification suite.')
    verify.add_argument('suite', choices=SUITES + ('all',))
    verify.add_argument('--parallel', action='store_true', help='Run jobs with joblib.')
    verify.add_argument('--n-jobs', type=int, default=-1)

    sweep_ = commands.add_parser('sweep', parents=[common], help='Tabulate a functional over a grid.')
    sweep_.add_argument('family', help='Gallery family, e.g. u_radial.')
    sweep_.add_argument('--grid', required=True, help='"key=v1,v2;key=v" pairs, q and s are exponents.')
    sweep_.add_argument('--functional', default='norm',
                        choices=('norm', 'starstar', 'gradient', 'sobolev', 'poincare-ratio',
                                 'inclusion-ratio'))

    commands.add_parser('gallery', parents=[common], help='List gallery ids and closed forms.')
    return parser


def _json_text(payload, config):
    payload = util.to_jsonable(payload)
    if config.timestamp:
        payload['timestamp'] = datetime.now(timezone.utc).isoformat(timespec='seconds')
    return util.stable_json(payload, indent=2) + '\n'


def _frame_text(frame):
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format='%.12g', lineterminator='\n')
    return buffer.getvalue()


def _emit(text, config):
    if config.out is None:
        sys.stdout.write(text)
    else:
        with open(config.out, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
        logger.info('wrote %s', config.out)


def _norm_text(norm):
    if norm.is_finite:
        return util.format_number(norm.value)
    return f'INFINITE({norm.reason.value})'


def cmd_norm(config):
    item = parse_item(config.item)
    p = config.p if config.p is not None else getattr(item, 'p', None)
    if p is None:
        msg = f'{item.id} has no exponent of its own, pass --p'
        raise DomainError(msg)
    pq = ExponentPair(p, config.q)
    kind = NormKind.STARSTAR if config.kind == 'starstar' else NormKind.QUASI
    if config.gradient:
        norm = item.gradient_norm(pq, config.quad_spec, kind)
    else:
        norm = item.norm(pq, config.quad_spec, kind)
    payload = {'item': item.id, 'pq': pq.to_dict(), 'kind': kind.value,
               'target': 'gradient' if config.gradient else 'value', 'norm': norm.to_json()}
    if config.format == 'json':
        text = _json_text(payload, config)
    elif config.format == 'csv':
        row = {'item': item.id, 'p': pq.p, 'q': float(pq.q), 'kind': kind.value,
               'target': payload['target'], 'status': 'FINITE' if norm.is_finite else 'INFINITE',
               'value': norm.value, 'reason': None if norm.is_finite else norm.reason.value}
        text = _frame_text(pd.DataFrame([row]))
    else:
        text = _norm_text(norm) + '\n'
    _emit(text, config)
    return EXIT_OK


def cmd_witness(config):
    bundle = witness_strict_inclusion(config.p, config.q1, config.q2, quad=config.quad_spec)
    if config.format == 'json':
        text = _json_text(bundle.to_dict(), config)
    elif config.format == 'csv':
        text = _frame_text(summary_frame(bundle.reports))
    else:
        lines = [f'alpha = {util.format_number(bundle.alpha)}',
                 f'function  {bundle.item_id}',
                 f'  q2 = {bundle.q2}: {_norm_text(bundle.norm_q2)} (closed form {_norm_text(bundle.closed_q2)})',
                 f'  q1 = {bundle.q1}: {_norm_text(bundle.norm_q1)}',
                 f'gradient  {bundle.gradient_item_id}',
                 f'  q2 = {bundle.q2}: {_norm_text(bundle.gradient_norm_q2)}',
                 f'  q1 = {bundle.q1}: {_norm_text(bundle.gradient_norm_q1)}',
                 format_pretty(bundle.reports)]
        text = '\n'.join(lines) + '\n'
    _emit(text, config)
    return EXIT_OK if bundle.passed else EXIT_FAIL


def cmd_verify(config):
    settings = {'seed': config.seed} if config.seed is not None else None
    suite = Suite(config.suite, settings, quad=config.quad_spec, n_jobs=config.n_jobs,
                  parallel=config.parallel, verbose=logger.isEnabledFor(logging.DEBUG)).run()
    counts = suite.counts()
    if config.out is not None:
        os.makedirs(config.out, exist_ok=True)
        meta = {'suite': config.suite, 'settings': suite.settings, 'counts': counts}
        write_jsonl(suite.reports, os.path.join(config.out, f'{config.suite}.jsonl'), meta,
                    config.timestamp)
        write_csv(suite.summary, os.path.join(config.out, f'{config.suite}.csv'))
    if config.format == 'json':
        text = '\n'.join(jsonl_lines(suite.reports, {'suite': config.suite, 'counts': counts},
                                     config.timestamp)) + '\n'
    elif config.format == 'csv':
        text = _frame_text(suite.summary)
    else:
        text = format_pretty(suite.reports) + '\n' + f'{config.suite}: {counts_line(counts)}\n'
    sys.stdout.write(text)
    return EXIT_FAIL if counts['FAIL'] else EXIT_OK


def cmd_sweep(config):
    table = sweep(config.family, config.grid, config.functional, config.quad_spec)
    if config.format == 'json':
        text = _json_text({'family': config.family, 'functional': config.functional,
                           'rows': table.to_dict(orient='records')}, config)
    elif config.format == 'pretty':
        text = table.to_string(index=False, float_format=lambda x: util.format_number(x)) + '\n'
    else:
        text = _frame_text(table)
    _emit(text, config)
    return EXIT_OK


def cmd_gallery(config):
    catalog = ClosedFormCatalog()
    entries = catalog.entries()
    if config.format == 'json':
        text = _json_text({'items': [item.id for item in catalog.items], 'entries': entries}, config)
    else:
        rows = [{'item': entry.item_id, 'target': entry.target, 'p': entry.pq.p,
                 'q': float(entry.pq.q), 'status': 'FINITE' if entry.norm.is_finite else 'INFINITE',
                 'closed_form': entry.norm.value,
                 'reason': None if entry.norm.is_finite else entry.norm.reason.value}
                for entry in entries]
        frame = pd.DataFrame(rows)
        if config.format == 'csv':
            text = _frame_text(frame)
        else:
            text = frame.to_string(index=False, float_format=lambda x: util.format_number(x)) + '\n'
    _emit(text, config)
    return EXIT_OK


COMMANDS = {'norm': cmd_norm, 'witness': cmd_witness, 'verify': cmd_verify, 'sweep': cmd_sweep,
            'gallery': cmd_gallery}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    util.custom_logger('lorentzlab', logging.DEBUG if args.verbose else logging.WARNING, args.log_file)
    try:
        config = RunConfig.from_args(args)
        logger.debug('config %s', util.stable_json(config))
        return COMMANDS[config.command](config)
    except (DomainError, PreconditionError) as exc:
        print(f'lorentzlab: error: {exc}', file=sys.stderr)
        return EXIT_USAGE
    except LorentzLabError as exc:
        print(f'lorentzlab: internal error: {exc}', file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:
        logger.exception('unexpected failure')
        print(f'lorentzlab: internal error: {type(exc).__name__}: {exc}', file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
