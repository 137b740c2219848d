import argparse
import os.path
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Tuple

import progressbar

from densicohom import cohomology, oracle
from densicohom.cohomology import CocycleSymbolic, NotACocycleError
from densicohom.exactlin import RationalParseError, format_rational, parse_rational
from densicohom.multiindex import InvalidParameterError as InvalidIndexError
from densicohom.params import InvalidParameterError, ParamSpace
from densicohom.parser.config_parser import ConfigParser, Error as ConfigError, ScanSpec
from densicohom.parser.file_generator import ReportWriter, scan_row
from densicohom.py3_logger import get_logger
from densicohom.symcalc import differential1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFICATION_FAILED = 3
EXIT_ORACLE_MISMATCH = 4
EXIT_NOT_STABILIZED = 5

log_levels = ['debug', 'info', 'warning', 'error', 'critical']


def is_valid_file(parser, arg):
    if not os.path.exists(arg):
        parser.error(arg + " does not exist.")
    else:
        return arg


def parse_rational_list(text: str) -> Tuple[Fraction, ...]:
    """Parses ``1/2,-1,0`` into exact rationals."""
    return tuple(parse_rational(item) for item in text.split(','))


def parse_grid(text: str) -> Tuple[Tuple[Fraction, ...], ...]:
    """Parses ``0,-1/2;0,-1/2``: slots separated by ``;``, weights by ``,``."""
    return tuple(parse_rational_list(slot) for slot in text.split(';'))


def _scan_point(point: Tuple[Tuple[Fraction, ...], int]) -> dict:
    lam, k = point
    return cohomology.compute(ParamSpace.from_shift(lam, k)).to_json()


class Runner:
    """
    Runs one sub command and returns its exit status.

    :param args: the parsed command line
    :param parser: the parser, used to report usage errors
    """

    def __init__(self, args: argparse.Namespace, parser: argparse.ArgumentParser):
        self.args = args
        self.parser = parser
        self.logger = get_logger(args.log_level or 'warning')
        self.writer = ReportWriter(Path(args.out) if getattr(args, 'out', None) else None)

    def run(self) -> int:
        return getattr(self, 'run_' + self.args.command)()

    def params(self) -> ParamSpace:
        """The module datum from --n, --lambda and --mu or --delta."""
        try:
            lam = parse_rational_list(self.args.lam)
            if len(lam) != self.args.n:
                self.parser.error("--lambda has {m} weights but --n is {n}."
                                  .format(m=len(lam), n=self.args.n))
            if self.args.delta is not None:
                return ParamSpace.from_shift(lam, self.args.delta)
            return ParamSpace(self.args.n, lam, self.args.mu)
        except (RationalParseError, InvalidParameterError) as exc:
            self.parser.error(str(exc))

    def run_dim(self) -> int:
        report = cohomology.compute(self.params())
        if self.args.format == 'csv':
            self.writer.write_rows([scan_row(report.to_json())], 'csv')
        else:
            self.writer.write_document(report.to_json())
        return EXIT_OK

    def run_basis(self) -> int:
        params = self.params()
        elements = []
        for index, cocycle in enumerate(cohomology.basis(params)):
            entry = {'index': index, 'type': 'B' if cocycle.is_b_type else 'C'}
            entry.update(cocycle.to_json())
            entry['annotation'] = cohomology.annotate(cocycle, params.n)
            elements.append(entry)
        if self.args.format == 'csv':
            self.writer.write_table([{'index': e['index'], 'type': e['type'],
                                      'annotation': e['annotation']} for e in elements])
        else:
            self.writer.write_document({'params': params.to_json(),
                                        'case': cohomology.classify(params).to_json(),
                                        'basis': elements})
        return EXIT_OK

    @staticmethod
    def perturb(cocycle: CocycleSymbolic, params: ParamSpace) -> CocycleSymbolic:
        """Adds 1 to the first level-k h'-coefficient."""
        k = cohomology.integral_shift(params)
        first = cohomology.build_lambda_matrix(params, k).cols[0]
        b = dict(cocycle.b)
        b[first] = b.get(first, Fraction(0)) + 1
        return CocycleSymbolic(b, cocycle.c, cocycle.name)

    def run_verify(self) -> int:
        params = self.params()
        results = []
        for index, cocycle in enumerate(cohomology.basis(params)):
            if self.args.perturb and index == 0:
                cocycle = self.perturb(cocycle, params)
            closed = differential1(cohomology.realize(cocycle, params)).is_zero()
            try:
                nontrivial = not cohomology.is_trivial(cocycle, params).trivial
            except NotACocycleError as exc:
                self.logger.info("Element {i}: {e}".format(i=index, e=exc))
                nontrivial = False
            passed = closed and nontrivial
            if not passed:
                self.logger.error("Element {i} failed: closed={c}, nontrivial={t}."
                                  .format(i=index, c=closed, t=nontrivial))
            results.append({'index': index, 'type': 'B' if cocycle.is_b_type else 'C',
                            'annotation': cohomology.annotate(cocycle, params.n),
                            'closed': closed, 'nontrivial': nontrivial, 'passed': passed})
        all_passed = all(result['passed'] for result in results)
        if self.args.format == 'csv':
            self.writer.write_table(results)
        else:
            self.writer.write_document({'params': params.to_json(),
                                        'perturbed': bool(self.args.perturb),
                                        'elements': results, 'passed': all_passed})
        return EXIT_OK if all_passed else EXIT_VERIFICATION_FAILED

    def box(self, params: ParamSpace) -> oracle.TruncationBox:
        default = oracle.default_box(params)
        try:
            return oracle.TruncationBox(
                default.max_order if self.args.max_order is None else self.args.max_order,
                default.max_degree if self.args.max_degree is None else self.args.max_degree,
                default.source_degree_margin if self.args.margin is None else self.args.margin)
        except oracle.InvalidBoxError as exc:
            self.parser.error(str(exc))

    def run_oracle(self) -> int:
        params = self.params()
        engine_dim = cohomology.compute(params).dim_h1
        try:
            result = oracle.stabilized_h1(params, self.box(params), self.args.max_steps)
        except oracle.InvalidBoxError as exc:
            self.parser.error(str(exc))
        match = result.stabilized and result.dim == engine_dim
        summary = {'engine_dim': engine_dim, 'oracle_dim': result.dim,
                   'stabilized': result.stabilized, 'steps': result.steps, 'match': match}
        if self.args.format == 'csv':
            self.writer.write_table([summary])
        else:
            document = {'params': params.to_json()}
            document.update(summary)
            document['oracle'] = result.to_json()
            self.writer.write_document(document)
        if not result.stabilized:
            self.logger.warning("Oracle did not stabilize within {s} steps.".format(s=result.steps))
            return EXIT_NOT_STABILIZED
        if not match:
            self.logger.error("Engine dimension {e} differs from oracle dimension {o}."
                              .format(e=engine_dim, o=result.dim))
            return EXIT_ORACLE_MISMATCH
        return EXIT_OK

    def scan_spec(self) -> ScanSpec:
        try:
            if self.args.config:
                spec = ConfigParser(Path(self.args.config)).scan_spec()
                if self.args.log_level is None:
                    get_logger(spec.log_level)
                return spec
            if self.args.n is None or self.args.k is None or self.args.grid is None:
                self.parser.error("scan needs --config, or --n, --k and --grid.")
            return ScanSpec(n=self.args.n, k=self.args.k, lambda_grid=parse_grid(self.args.grid),
                            output_format=self.args.format,
                            output_path=Path(self.args.out) if self.args.out else None,
                            jobs=self.args.jobs)
        except (ConfigError, RationalParseError) as exc:
            self.parser.error(str(exc))

    def run_scan(self) -> int:
        spec = self.scan_spec()
        if spec.k < 0:
            self.parser.error("--k must be a natural number.")
        if spec.jobs < 1:
            self.parser.error("--jobs must be positive.")
        if self.args.out is None and spec.output_path is not None:
            self.writer = ReportWriter(spec.output_path)
        points = [(lam, spec.k) for lam in spec.points]
        self.logger.info("Scanning {m} points with n={n}, k={k}."
                         .format(m=len(points), n=spec.n, k=spec.k))

        p_bar = None
        if self.args.progress:
            widgets = [' [', progressbar.Timer(), ' - ', progressbar.SimpleProgress(), '] ',
                       progressbar.Bar(), ' [', progressbar.ETA(), '] ', ]
            p_bar = progressbar.ProgressBar(max_value=len(points), widgets=widgets, fd=sys.stderr)
            p_bar.start()

        reports = []
        if spec.jobs > 1:
            with ProcessPoolExecutor(max_workers=spec.jobs) as executor:
                # map yields in submission order, whatever the completion order
                for report in executor.map(_scan_point, points):
                    reports.append(report)
                    if p_bar:
                        p_bar.update(len(reports))
        else:
            for point in points:
                reports.append(_scan_point(point))
                if p_bar:
                    p_bar.update(len(reports))
        if p_bar:
            p_bar.finish()

        self.writer.write_rows([scan_row(report) for report in reports], spec.output_format)
        return EXIT_OK

    def run_matrix(self) -> int:
        if self.args.k < 0:
            self.parser.error("--k must be a natural number.")
        try:
            lam = parse_rational_list(self.args.lam)
            if len(lam) != self.args.n:
                self.parser.error("--lambda has {m} weights but --n is {n}."
                                  .format(m=len(lam), n=self.args.n))
            params = ParamSpace.from_shift(lam, self.args.k)
        except (RationalParseError, InvalidParameterError, InvalidIndexError) as exc:
            self.parser.error(str(exc))
        lam_matrix = cohomology.build_lambda_matrix(params, self.args.k)
        if self.args.format == 'csv':
            rows = []
            for beta, entries in zip(lam_matrix.rows, lam_matrix.matrix.entries):
                row = {'row': str(beta)}
                row.update({str(alpha): format_rational(value)
                            for alpha, value in zip(lam_matrix.cols, entries)})
                rows.append(row)
            self.writer.write_table(rows)
            return EXIT_OK
        document = {'n': params.n, 'lambda': params.to_json()['lambda'], 'k': self.args.k}
        document.update(lam_matrix.to_json())
        if self.args.k == 0:
            document['note'] = "k = 0: there is no level k-1, the matrix has no rows."
        self.writer.write_document(document)
        return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, with_mu: bool = True):
    parser.add_argument('--n', dest='n', type=int, required=True, help='number of tensor slots')
    parser.add_argument('--lambda', dest='lam', metavar='LIST', required=True,
                        help='comma separated weights, each an integer or p/q')
    if with_mu:
        target = parser.add_mutually_exclusive_group(required=True)
        target.add_argument('--mu', dest='mu', type=parse_rational_arg, help='target weight')
        target.add_argument('--delta', dest='delta', type=parse_rational_arg,
                            help='shift, sets mu to the sum of the weights plus delta')
    _add_output(parser)


def _add_output(parser: argparse.ArgumentParser):
    parser.add_argument('--format', dest='format', choices=['json', 'csv'], default='json')
    parser.add_argument('--out', dest='out', metavar='PATH', default=None,
                        help='file to write, standard output by default')
    parser.add_argument('--log-level', dest='log_level', choices=log_levels, default=None)


def parse_rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except RationalParseError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='densicohom',
        description='Computes H^1(sl(2), D_{lambda,mu}) of multilinear differential operators '
                    'on weighted densities')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    _add_common(commands.add_parser('dim', help='dimensions and bounds at one point'))
    _add_common(commands.add_parser('basis', help='canonical cocycle basis'))

    verify = commands.add_parser('verify', help='closedness and nontriviality of the basis')
    _add_common(verify)
    verify.add_argument('--perturb', action='store_true',
                        help='add 1 to one coefficient of the first element before checking')

    oracle_parser = commands.add_parser('oracle', help='compare with the truncated computation')
    _add_common(oracle_parser)
    oracle_parser.add_argument('--max-order', dest='max_order', type=int, default=None)
    oracle_parser.add_argument('--max-degree', dest='max_degree', type=int, default=None)
    oracle_parser.add_argument('--margin', dest='margin', type=int, default=None)
    oracle_parser.add_argument('--max-steps', dest='max_steps', type=int, default=5)

    scan = commands.add_parser('scan', help='sweep a grid of weights at fixed shift')
    scan.add_argument('--config', dest='config', metavar='FILE', default=None,
                      type=lambda x: is_valid_file(scan, x), help='scan config file in yaml format')
    scan.add_argument('--n', dest='n', type=int, default=None)
    scan.add_argument('--k', dest='k', type=int, default=None, help='the shift delta')
    scan.add_argument('--grid', dest='grid', metavar='GRID', default=None,
                      help="per slot weights, slots separated by ';', e.g. '0,-1/2;0,-1/2'")
    scan.add_argument('--jobs', dest='jobs', type=int, default=1)
    scan.add_argument('--progress', action='store_true', help='show a progress bar on stderr')
    _add_output(scan)

    matrix = commands.add_parser('matrix', help='the Lambda matrix at level k')
    _add_common(matrix, with_mu=False)
    matrix.add_argument('--k', dest='k', type=int, required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None):
    parser = build_parser()
    args = parser.parse_args(argv)
    runner = Runner(args, parser)
    sys.exit(runner.run())


if __name__ == '__main__':
    main()
