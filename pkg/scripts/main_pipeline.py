"""
Main Pipeline for conifold wall-crossing computations
Exposes every computation as a subcommand with json, csv or pretty output
"""

import csv
import io
import json
import logging
import os
import sys
from math import comb
from typing import Callable, Dict, List, Optional, Tuple

# Import our modules
from diagrams import JSequence, Order, YoungDiagram
from errors import PreconditionError, VerificationFailure, WallCrossingError
from flip import FlipSetup, kn_strata, resolve, resolution_block_width, sod_summands, strip_transform, verify_flip_windows
from quiver import Side, Wall, WallFamily, ext_quiver_data, ext_quiver_from_euler, relevant_walls
from series import a_coeff, crosscheck, pt_summand_compare, pt_summands
from verification import agreement, package_certificate, require
from windows import WallWindowSetup, conifold_sod, hall_twists, verify_koszul_block, window_interval

# Configuration
DEFAULT_FORMAT = os.environ.get('WALLCROSS_FORMAT', 'json')
DEFAULT_LOG_LEVEL = os.environ.get('WALLCROSS_LOG_LEVEL', 'WARNING')

FORMATS = ('json', 'csv', 'pretty')
FAMILIES = {'W': WallFamily.W, 'Wp': WallFamily.W_PRIME}
SIDES = {'plus': (Side.PLUS,), 'minus': (Side.MINUS,), 'both': (Side.PLUS, Side.MINUS)}

logger = logging.getLogger(__name__)


def parse_int_list(text: str) -> Tuple[int, ...]:
    """'4,2,1' -> (4, 2, 1); the empty string is the empty tuple."""
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(','))
    except ValueError:
        raise PreconditionError(f"expected comma-separated integers, got {text!r}")


def parse_diagram(text: str) -> YoungDiagram:
    """Row lengths, longest first, as in '4,2,1'."""
    return YoungDiagram(parse_int_list(text))


def _report(command: str, params: Dict, rows: List[Dict], passed: bool = True, certificate: Dict = None) -> Dict:
    report = {
        'command': command,
        'params': params,
        'rows': rows,
        'passed': passed,
    }
    if certificate is not None:
        report['certificate'] = certificate
    return report


class WallCrossingPipeline:
    def __init__(self, output_format: str = DEFAULT_FORMAT):
        if output_format not in FORMATS:
            raise PreconditionError(f"unknown output format {output_format!r}; choose from {', '.join(FORMATS)}")
        self.output_format = output_format

        self.commands: Dict[str, Callable[[Dict], Dict]] = {
            'pt-series': self.cmd_pt_series,
            'crosscheck': self.cmd_crosscheck,
            'pt-summands': self.cmd_pt_summands,
            'resolve': self.cmd_resolve,
            'strip': self.cmd_strip,
            'sod': self.cmd_sod,
            'kn-strata': self.cmd_kn_strata,
            'flip-window-check': self.cmd_flip_window_check,
            'wallcross': self.cmd_wallcross,
            'window-check': self.cmd_window_check,
            'walls': self.cmd_walls,
            'ext-quiver': self.cmd_ext_quiver,
            'twists': self.cmd_twists,
        }

    def run(self, command: str, params: Dict) -> Dict:
        logger.info("running %s with %s", command, params)
        return self.commands[command](params)

    # ============================================
    # GENERATING SERIES
    # ============================================

    def cmd_pt_series(self, params: Dict) -> Dict:
        nmax = params['nmax']
        bmax = params['bmax'] if params.get('bmax') is not None else nmax
        result = crosscheck((nmax, bmax))
        return _report(
            'pt-series',
            {'nmax': nmax, 'bmax': bmax},
            result['rows'],
            passed=result['passed'],
            certificate=package_certificate({'nmax': nmax, 'bmax': bmax, 'walls': result['walls']}, result['checks']),
        )

    def cmd_crosscheck(self, params: Dict) -> Dict:
        nmax = params['nmax']
        bmax = params['bmax'] if params.get('bmax') is not None else nmax
        result = crosscheck((nmax, bmax), walls=params.get('walls'))
        rows = [
            {'check': check['name'], 'passed': check['passed'], 'checked': check['checked']}
            for check in result['checks']
        ]
        certificate = package_certificate({'nmax': nmax, 'bmax': bmax, 'walls': result['walls']}, result['checks'])
        certificate['first_failure'] = result['first_failure']
        return _report('crosscheck', {'nmax': nmax, 'bmax': bmax, 'walls': result['walls']},
                       rows, passed=result['passed'], certificate=certificate)

    def cmd_pt_summands(self, params: Dict) -> Dict:
        n, beta = params['n'], params['beta']
        if beta > n:
            raise PreconditionError(f"curve class beta = {beta} exceeds n = {n}")
        walls = params['walls'] if params.get('walls') is not None else n
        summands = pt_summands((n, n - beta), walls)
        rows = [dict(order=i, **summand.to_json()) for i, summand in enumerate(summands)]
        checks = [
            agreement('consecutive summands descend', range(1, len(summands)),
                      lambda i: pt_summand_compare(summands[i - 1], summands[i]).value,
                      lambda i: Order.GREATER.value),
        ]
        if walls >= n:
            checks.append(agreement('summand count = a', [(n, beta)], lambda key: len(summands),
                                    lambda key: a_coeff(*key)))
        subject = {'n': n, 'beta': beta, 'walls': walls}
        return _report('pt-summands', subject, rows,
                       passed=all(check['passed'] for check in checks),
                       certificate=package_certificate(subject, checks))

    # ============================================
    # GRASSMANNIAN FLIP
    # ============================================

    def cmd_resolve(self, params: Dict) -> Dict:
        delta = parse_diagram(params['diagram'])
        d, b = params['d'], params['b']
        steps = resolve(delta, d, b)
        rows = [dict(step=i, **step.to_json()) for i, step in enumerate(steps, start=1)]
        return _report('resolve', {
            'diagram': delta.to_json(),
            'd': d,
            'b': b,
            'c': resolution_block_width(delta, d, b),
        }, rows)

    def cmd_strip(self, params: Dict) -> Dict:
        delta = parse_diagram(params['diagram'])
        stripped = strip_transform(delta, params['d'])
        rows = [{
            'delta': delta.to_json(),
            'stripped': stripped.to_json(),
            'removed': delta.size() - stripped.size(),
        }]
        return _report('strip', {'diagram': delta.to_json(), 'd': params['d']}, rows)

    def cmd_sod(self, params: Dict) -> Dict:
        setup = FlipSetup(params['a'], params['b'], params['d'])
        c = params['c'] if params.get('c') is not None else setup.a
        summands = sod_summands(setup, c)
        rows = [dict(order=i, **summand.to_json()) for i, summand in enumerate(summands)]
        check = agreement(
            'summand ranks add up to |B_c(d)|',
            [(c, setup.d)],
            lambda key: sum(summand.child_size for summand in summands),
            lambda key: comb(*key),
        )
        return _report('sod', dict(setup.to_json(), c=c), rows, passed=check['passed'],
                       certificate=package_certificate(dict(setup.to_json(), c=c), [check]))

    def cmd_kn_strata(self, params: Dict) -> Dict:
        setup = FlipSetup(params['a'], params['b'], params['d'])
        rows, checks = [], []
        for side, width in ((Side.PLUS, setup.a), (Side.MINUS, setup.b)):
            strata = kn_strata(setup, side)
            rows.extend(stratum.to_json() for stratum in strata)
            checks.append(agreement(
                f'eta side {side.value} = ({"a" if side is Side.PLUS else "b"} - i)(d - i)',
                range(setup.d),
                lambda i, strata=strata: strata[i].eta,
                lambda i, width=width: (width - i) * (setup.d - i),
            ))
        return _report('kn-strata', setup.to_json(), rows,
                       passed=all(check['passed'] for check in checks),
                       certificate=package_certificate(setup.to_json(), checks))

    def cmd_flip_window_check(self, params: Dict) -> Dict:
        setup = FlipSetup(params['a'], params['b'], params['d'])
        verdict = verify_flip_windows(setup)
        rows = [stratum.to_json() for side in Side for stratum in kn_strata(setup, side)]
        return _report('flip-window-check', setup.to_json(), rows, passed=verdict['passed'],
                       certificate=package_certificate(setup.to_json(), [verdict]))

    # ============================================
    # CONIFOLD WALLS
    # ============================================

    def cmd_wallcross(self, params: Dict) -> Dict:
        v = (params['v0'], params['v1'])
        m = params['m']
        family = FAMILIES[params.get('family') or 'W']
        summands = conifold_sod(v, m, family)
        rows = [dict(order=i, **summand.to_json()) for i, summand in enumerate(summands)]
        depth = max((summand.l for summand in summands), default=0)
        check = agreement(
            'copies per l = binom(m, l)',
            range(depth + 1),
            lambda l: sum(1 for summand in summands if summand.l == l),
            lambda l: comb(m, l),
        )
        subject = {'v': list(v), 'm': m, 'family': family.value}
        return _report('wallcross', subject, rows, passed=check['passed'],
                       certificate=package_certificate(subject, [check]))

    def cmd_window_check(self, params: Dict) -> Dict:
        setup = WallWindowSetup(params['v0'], params['v1'], params['m'], params['d'])
        sides = SIDES[params.get('side') or 'plus']
        rows, checks = [], []
        for side in sides:
            for i in range(setup.d):
                rows.append({'side': side.value, 'i': i, 'interval': window_interval(setup, i, side).to_json()})
            checks.append(verify_koszul_block(setup, side))
        return _report('window-check', setup.to_json(), rows,
                       passed=all(check['passed'] for check in checks),
                       certificate=package_certificate(setup.to_json(), checks))

    def cmd_walls(self, params: Dict) -> Dict:
        v = (params['v0'], params['v1'])
        family = FAMILIES[params.get('family') or 'W']
        rows = [dict(wall.to_json(), max_l=l) for wall, l in relevant_walls(v, family)]
        return _report('walls', {'v': list(v), 'family': family.value}, rows)

    def cmd_ext_quiver(self, params: Dict) -> Dict:
        v = (params['v0'], params['v1'])
        m, d = params['m'], params['d']
        family = FAMILIES[params.get('family') or 'W']
        wall = Wall(family, m)
        from_euler = ext_quiver_from_euler(v, wall, d)
        checks = [agreement('a - b = m', [m], lambda key: from_euler.a - from_euler.b, lambda key: key)]
        if family is WallFamily.W:
            closed = ext_quiver_data(v, m, d)
            checks.append(agreement(
                'closed form = Euler pairing',
                ['a', 'b', 'c', 'C'],
                lambda key: getattr(closed, key),
                lambda key: getattr(from_euler, key),
            ))
        data = closed if family is WallFamily.W else from_euler
        subject = {'v': list(v), 'm': m, 'd': d, 'family': family.value}
        return _report('ext-quiver', subject, [data.to_json()],
                       passed=all(check['passed'] for check in checks),
                       certificate=package_certificate(subject, checks))

    def cmd_twists(self, params: Dict) -> Dict:
        values = parse_int_list(params.get('j') or '')
        d = params['d']
        l = params['l'] if params.get('l') is not None else len(values)
        twist = hall_twists(l, JSequence(values, d), params['m'], d)
        return _report('twists', {'l': l, 'j': list(values), 'm': params['m'], 'd': d}, [twist.to_json()])

    # ============================================
    # OUTPUT
    # ============================================

    def render(self, report: Dict) -> str:
        if self.output_format == 'json':
            return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        if self.output_format == 'csv':
            return render_csv(report['rows'])
        return render_pretty(report)


def _cell(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(',', ':'))
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return str(value)


def render_csv(rows: List[Dict]) -> str:
    """Header row from the first row's keys; nested values as compact JSON."""
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = list(rows[0].keys())
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(key, '')) for key in header])
    return buffer.getvalue()


def render_pretty(report: Dict) -> str:
    lines = [
        "=" * 70,
        f"🧮 CONIFOLD WALL-CROSSING - {report['command']}",
        "=" * 70,
        "Parameters: " + ", ".join(f"{key}={_cell(value)}" for key, value in report['params'].items()),
        "-" * 70,
    ]
    for row in report['rows']:
        lines.append("  " + "  ".join(f"{key}={_cell(value)}" for key, value in row.items()))
    if not report['rows']:
        lines.append("  (no rows)")
    certificate = report.get('certificate')
    if certificate:
        lines.append("-" * 70)
        for check in certificate['certificate']['checks']:
            mark = "✓" if check['passed'] else "❌"
            lines.append(f"{mark} {check['name']} ({check['checked']} checked)")
            if not check['passed']:
                lines.append(f"   → first failure: {_cell(check['first_failure'])}")
    lines.append("=" * 70)
    lines.append("✅ PASSED" if report['passed'] else "❌ FAILED")
    return "\n".join(lines) + "\n"


def _failing_check(report: Dict) -> Dict:
    """The first failed check of the report's certificate, else the report itself."""
    certificate = report.get('certificate') or {}
    for check in certificate.get('certificate', {}).get('checks', []):
        if not check['passed']:
            return check
    return dict(report, name=report['command'])


def build_parser():
    import argparse

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, default=DEFAULT_FORMAT, help='Output format')
    common.add_argument('--output', help='Write the report to this file instead of stdout')
    common.add_argument('--log-level', default=DEFAULT_LOG_LEVEL, help='Logging level (DEBUG, INFO, ...)')

    parser = argparse.ArgumentParser(description='Conifold wall-crossing combinatorics')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('pt-series', parents=[common], help='PT invariants P_(n,beta) and a_(n,beta)')
    p.add_argument('--nmax', type=int, required=True)
    p.add_argument('--bmax', type=int, help='Largest curve class (defaults to nmax)')

    p = sub.add_parser('crosscheck', parents=[common], help='Three-way series crosscheck')
    p.add_argument('--nmax', type=int, required=True)
    p.add_argument('--bmax', type=int)
    p.add_argument('--walls', type=int, help='Number of walls to cross (defaults to max(nmax, 1))')

    p = sub.add_parser('pt-summands', parents=[common], help='Ordered summands of the categorical PT invariant')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--beta', type=int, required=True)
    p.add_argument('--walls', type=int, help='Number of walls to cross (defaults to n)')

    p = sub.add_parser('resolve', parents=[common], help='Resolution of a window object by rank-d ones')
    p.add_argument('--diagram', required=True, help='Row lengths, longest first, e.g. 4,2,1')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--b', type=int, required=True)

    p = sub.add_parser('strip', parents=[common], help='Strip the full first column of a diagram')
    p.add_argument('--diagram', required=True)
    p.add_argument('--d', type=int, required=True)

    p = sub.add_parser('sod', parents=[common], help='Ordered summands of a flip window')
    p.add_argument('--a', type=int, required=True)
    p.add_argument('--b', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--c', type=int, help='Window width (defaults to a)')

    for name, help_text in (('kn-strata', 'Kempf-Ness strata of the flip'),
                            ('flip-window-check', 'Exhaustive flip window inclusion')):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument('--a', type=int, required=True)
        p.add_argument('--b', type=int, required=True)
        p.add_argument('--d', type=int, required=True)

    p = sub.add_parser('wallcross', parents=[common], help='Summands across the wall W_m')
    p.add_argument('--v0', type=int, required=True)
    p.add_argument('--v1', type=int, required=True)
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--family', choices=sorted(FAMILIES), default='W')

    p = sub.add_parser('window-check', parents=[common], help='Koszul window certificates at a wall')
    p.add_argument('--v0', type=int, required=True)
    p.add_argument('--v1', type=int, required=True)
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--side', choices=sorted(SIDES), default='plus')

    p = sub.add_parser('walls', parents=[common], help='Walls relevant to a dimension vector')
    p.add_argument('--v0', type=int, required=True)
    p.add_argument('--v1', type=int, required=True)
    p.add_argument('--family', choices=sorted(FAMILIES), default='W')

    p = sub.add_parser('ext-quiver', parents=[common], help='Ext-quiver dimensions at a polystable point')
    p.add_argument('--v0', type=int, required=True)
    p.add_argument('--v1', type=int, required=True)
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--family', choices=sorted(FAMILIES), default='W')

    p = sub.add_parser('twists', parents=[common], help='Hall product twist exponents')
    p.add_argument('--l', type=int, help='Number of factors (defaults to the length of --j)')
    p.add_argument('--j', default='', help='j-sequence, e.g. 0,1')
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--d', type=int, required=True)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        stream=sys.stderr,
        format='%(asctime)s %(name)s %(levelname)s %(message)s',
    )

    params = {key: value for key, value in vars(args).items()
              if key not in ('command', 'format', 'output', 'log_level')}
    try:
        pipeline = WallCrossingPipeline(output_format=args.format)
        report = pipeline.run(args.command, params)
    except WallCrossingError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2

    text = pipeline.render(report)
    if args.output:
        with open(args.output, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        if args.format == 'pretty':
            print(f"✓ Report saved: {args.output}")
    else:
        sys.stdout.write(text)

    try:
        require(_failing_check(report))
    except VerificationFailure as e:
        print(f"❌ {args.command}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
