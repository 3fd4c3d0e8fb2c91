"""`manage.py opkit`: the command-line front end of the library.

    opkit diagram normalize|eval|render FILE
    opkit operad subst Y.json X.json --arity K
    opkit operad check CAND.json --arity K
    opkit operad clone-table --size N
    opkit prof compose PSI.json PHI.json
    opkit check distlaw --variant V --category C.json
    opkit check kleisli [--f F.json --g G.json --x X.json]
    opkit properad lambda 2,1 1,2 [--list]
    opkit suite run [--only 1,4]
    opkit report list

Every leaf takes --json, --seed, --save and --timings. Exit codes: 0 pass,
1 law violation, 2 malformed input, 3 non-stabilizing truncation.
"""

import argparse
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from django.db import DatabaseError

from api.models import RunRecord
from api.serializers import RunRecordSerializer
from opkit import conf, diagrams, distlaw, operads, properads, samples
from opkit.diagrams import Variant
from opkit.errors import MalformedInput, OpkitError, VariantError
from opkit.fincat import render
from opkit.prof import KleisliSample, kleisli_laws_check, prof_compose, prof_identity
from services import formats
from services.reports import SCHEMA, RunReport, runs_table, table
from services.suite import SUITE_VERSION, run_suite

logger = logging.getLogger(__name__)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='print the machine-readable run report')
    common.add_argument('--seed', type=int, default=None, help='seed for every random choice (default OPKIT_SEED)')
    common.add_argument('--save', action='store_true', help='store the run report in the run history')
    common.add_argument('--timings', action='store_true', help='include timings in the report')
    return common


def _numbers(text: str):
    return [int(v) for v in text.split(',') if v.strip()]


class Command(BaseCommand):
    help = 'Compute with string diagrams, profunctors, operads and properads, and check their laws.'

    def add_arguments(self, parser):
        common = _common()
        groups = parser.add_subparsers(dest='group', required=True)

        diagram = groups.add_parser('diagram', help='string diagrams').add_subparsers(dest='action', required=True)
        p = diagram.add_parser('normalize', parents=[common], help='normal form in a variant')
        p.add_argument('file')
        p.add_argument('--variant', required=True)
        p.add_argument('--base', help='base category: JSON file or sample name')
        p.add_argument('--sources', help='comma-separated objects on the input wires')
        p = diagram.add_parser('eval', parents=[common], help='the function of a diagram over 1')
        p.add_argument('file')
        p = diagram.add_parser('render', parents=[common], help='print a diagram in canonical syntax')
        p.add_argument('file')
        p.add_argument('--variant', help='also typecheck against a variant')

        operad = groups.add_parser('operad', help='substitution and operad laws').add_subparsers(
            dest='action', required=True)
        p = operad.add_parser('subst', parents=[common], help='sizes of Y • X up to an arity')
        p.add_argument('y')
        p.add_argument('x')
        p.add_argument('--arity', type=int, required=True)
        p.add_argument('--variant', help='expected variant of both inputs')
        p.add_argument('--form', choices=[operads.GENERAL, operads.CLONE])
        p.add_argument('--lenient', action='store_true', help='accept index ranges that cannot be made exact')
        p = operad.add_parser('check', parents=[common], help='monoid laws of an operad candidate')
        p.add_argument('candidate')
        p.add_argument('--arity', type=int, required=True)
        p.add_argument('--limit', type=int, default=20000, help='associativity instances before sampling')
        p = operad.add_parser('clone-table', parents=[common], help='unary table of an endomorphism clone')
        p.add_argument('--size', type=int, default=2)
        p.add_argument('--check', action='store_true', help='also run the monoid laws up to arity 2')

        prof = groups.add_parser('prof', help='profunctors').add_subparsers(dest='action', required=True)
        p = prof.add_parser('compose', parents=[common], help='class counts of Psi ∘ Phi')
        p.add_argument('psi')
        p.add_argument('phi')

        check = groups.add_parser('check', help='law checks').add_subparsers(dest='action', required=True)
        p = check.add_parser('distlaw', parents=[common], help='the four distributive law equations')
        p.add_argument('--variant', required=True)
        p.add_argument('--category', required=True, help='JSON file or sample name')
        p.add_argument('--presheaf', action='append', default=[], help='presheaf JSON (repeatable)')
        p.add_argument('--max-len', type=int, default=2)
        p = check.add_parser('kleisli', parents=[common], help='Kleisli structure equations')
        p.add_argument('--f', dest='f_file')
        p.add_argument('--g', dest='g_file')
        p.add_argument('--x', dest='x_file')
        p.add_argument('--samples', type=int, default=4)

        properad = groups.add_parser('properad', help='connected permutations').add_subparsers(
            dest='action', required=True)
        p = properad.add_parser('lambda', parents=[common], help='count connected wirings')
        p.add_argument('ms')
        p.add_argument('ns')
        p.add_argument('--list', action='store_true')
        p.add_argument('--oracle', action='store_true', help='cross-check with the unpruned search')

        suite = groups.add_parser('suite', help='acceptance suite').add_subparsers(dest='action', required=True)
        p = suite.add_parser('run', parents=[common], help=f"run suite version {SUITE_VERSION}")
        p.add_argument('--only', type=_numbers, default=None, help='comma-separated entry numbers')

        report = groups.add_parser('report', help='run history').add_subparsers(dest='action', required=True)
        p = report.add_parser('list', parents=[common], help='stored runs')
        p.add_argument('--limit', type=int, default=20)

    def handle(self, *args, **options):
        group, action = options['group'], options['action']
        seed = conf.default_seed() if options['seed'] is None else options['seed']
        options['seed'] = seed
        report = RunReport(command=f"{group} {action}", seed=seed)
        handler = getattr(self, f"_{group}_{action.replace('-', '_')}")
        lines = []
        try:
            with report.timed('total'):
                lines = handler(report, options) or []
        except OpkitError as exc:
            logger.info("%s failed: %s", report.command, exc)
            report.fail(exc)
        except Exception as exc:
            logger.exception("%s crashed", report.command)
            report.fail(exc)

        if options['json']:
            self.stdout.write(report.to_json(include_timings=options['timings']))
        else:
            for line in lines:
                self.stdout.write(line)
            if (report.checks and not lines) or (report.witnesses and report.error is None):
                self.stdout.write(report.render_text(include_timings=options['timings']))
            elif options['timings']:
                self.stdout.write(table([{'step': k, 'seconds': v} for k, v in report.timings.items()],
                                        ['step', 'seconds']))
        if options['save']:
            self._save(report, options['timings'])
        if report.exit_code:
            first = report.witnesses[0]
            message = report.error or (f"{len(report.witnesses)} law violation(s); first: {first['kind']} "
                                       f"in {first.get('check', '?')}")
            raise CommandError(message, returncode=report.exit_code)

    def _save(self, report: RunReport, timings: bool) -> None:
        try:
            RunRecord.objects.create(command=report.command, outcome=report.outcome, exit_code=report.exit_code,
                                     seed=report.seed, schema=SCHEMA, report=report.to_dict(timings))
        except DatabaseError as exc:
            raise CommandError(f"run history is unavailable ({exc}); run `manage.py migrate` first", returncode=2)

    # diagram

    def _diagram_normalize(self, report, options):
        d, _ = formats.load_diagram(options['file'])
        report.add_input(options['file'])
        base = None
        if options['base']:
            base = formats.resolve_category(options['base'], Path('.'))
        sources = options['sources'].split(',') if options['sources'] else None
        nf = diagrams.normalize(d, options['variant'], base, sources)
        report.result = nf.to_dict()
        report.result['diagram'] = diagrams.render(diagrams.to_diagram(nf, base))
        return [f"shape: {nf.shape}", f"normal form: {report.result['diagram']}"]

    def _diagram_eval(self, report, options):
        d, _ = formats.load_diagram(options['file'])
        report.add_input(options['file'])
        f = diagrams.to_function(d)
        report.result = {'function': list(f.table), 'inputs': f.cod, 'outputs': f.dom}
        return [str(f)]

    def _diagram_render(self, report, options):
        d, _ = formats.load_diagram(options['file'])
        report.add_input(options['file'])
        inputs, outputs = diagrams.typecheck(d, options['variant'])
        text = diagrams.render(d)
        report.result = {'diagram': text, 'inputs': inputs, 'outputs': outputs}
        return [text]

    # operad

    def _operad_subst(self, report, options):
        y = formats.load_arity_presheaf(options['y'])
        x = formats.load_arity_presheaf(options['x'])
        report.add_input(options['y'])
        report.add_input(options['x'])
        if options['variant']:
            wanted = Variant.parse(options['variant'])
            for p in (y, x):
                if p.variant != wanted:
                    raise VariantError(f"{p.name} is over {p.variant.label}, not {wanted.label}")
        yx = operads.subst(y, x, max_arity=options['arity'], form=options['form'], strict=not options['lenient'])
        rows = [{'arity': p, 'classes': len(yx.at(p))} for p in range(options['arity'] + 1)]
        for row in rows:
            row['exact'] = row['arity'] not in yx.inexact
        report.result = {'form': yx.form, 'sizes': {str(r['arity']): r['classes'] for r in rows},
                         'inexact': sorted(yx.inexact)}
        return [table(rows, ['arity', 'classes', 'exact'])]

    def _operad_check(self, report, options):
        cand = formats.load_operad_candidate(options['candidate'])
        report.add_input(options['candidate'])
        report.absorb(operads.monoid_check(cand, up_to_arity=options['arity'], limit=options['limit'],
                                           seed=options['seed']))
        report.result = {'candidate': cand.name, 'arity': options['arity']}
        return []

    def _operad_clone_table(self, report, options):
        cand = operads.end_clone(tuple(str(i) for i in range(options['size'])),
                                 up_to_arity=2 if options['check'] else 1)
        labels, rows = operads.unary_table(cand)
        names = [''.join(str(v) for v in op) for op in labels]
        data = [{'': names[i], **{names[j]: ''.join(str(v) for v in rows[i][j]) for j in range(len(names))}}
                for i in range(len(names))]
        if options['check']:
            report.absorb(operads.monoid_check(cand, up_to_arity=2, seed=options['seed']))
        report.result = {'operations': names, 'table': [[r[n] for n in names] for r in data]}
        return [table(data, [''] + names)]

    # prof

    def _prof_compose(self, report, options):
        psi = formats.load_profunctor(options['psi'])
        phi = formats.load_profunctor(options['phi'])
        report.add_input(options['psi'])
        report.add_input(options['phi'])
        composite = prof_compose(psi, phi)
        rows = [{'src': render(c), 'tgt': render(e), 'classes': len(composite.quotient(c, e))}
                for c in phi.src.objects for e in psi.tgt.objects]
        report.result = {'sizes': rows}
        return [table(rows, ['src', 'tgt', 'classes'])]

    # check

    def _check_distlaw(self, report, options):
        variant = Variant.parse(options['variant'])
        variant.require_monad()
        category = formats.resolve_category(options['category'], Path('.'))
        if options['category'] not in samples.CATEGORY_NAMES:
            report.add_input(options['category'])
        presheaves = []
        for path in options['presheaf']:
            presheaves.append(formats.load_functor(path))
            report.add_input(path)
        if not presheaves:
            gen = samples.rng(options['seed'])
            presheaves = [samples.random_functor(gen, category, name=f"X{i}") for i in range(2)]
        sample = distlaw.DistSample(category.name or 'C', category, tuple(presheaves), options['max_len'],
                                    category, prof_identity(category))
        report.absorb_all(distlaw.check_all(variant, sample))
        report.absorb(distlaw.check_naturality(variant, sample))
        report.result = {'variant': variant.name, 'category': category.name}
        return []

    def _check_kleisli(self, report, options):
        files = [options['f_file'], options['g_file'], options['x_file']]
        if any(files):
            if not all(files):
                raise MalformedInput("give all of --f, --g and --x, or none")
            f, g = formats.load_profunctor(files[0]), formats.load_profunctor(files[1])
            x = formats.load_functor(files[2])
            for path in files:
                report.add_input(path)
            family = [KleisliSample('files', f.src, f.tgt, g.tgt, f, g, x)]
        else:
            family = samples.kleisli_samples(options['seed'], count=options['samples'])
        report.absorb_all(kleisli_laws_check(s) for s in family)
        report.result = {'samples': len(family)}
        return []

    # properad

    def _properad_lambda(self, report, options):
        ms, ns = properads.profile(options['ms']), properads.profile(options['ns'])
        found = properads.connected_perms(ms, ns)
        report.result = {'ms': list(ms), 'ns': list(ns), 'count': len(found)}
        lines = [str(len(found))]
        if options['list']:
            report.result['perms'] = [c.line() for c in found]
            lines.extend(c.line() for c in found)
        if options['oracle']:
            report.absorb(properads.check_oracle_pair(ms, ns))
        return lines

    # suite

    def _suite_run(self, report, options):
        rows = run_suite(options['seed'], options['only'])
        summary = []
        for row in rows:
            check = report.absorb(row['report'])
            report.timings[f"{row['number']}"] = round(row['seconds'], 6)
            summary.append({'#': row['number'], 'entry': row['title'], 'instances': check.instances,
                            'result': row['outcome'].upper()})
        report.result = {'suite_version': SUITE_VERSION, 'entries': [
            {'number': r['#'], 'title': r['entry'], 'passed': r['result'] == 'PASS', 'outcome': r['result'].lower()}
            for r in summary]}
        return [f"suite version {SUITE_VERSION}", table(summary, ['#', 'entry', 'instances', 'result'])]

    # report

    def _report_list(self, report, options):
        try:
            records = list(RunRecord.objects.all()[:options['limit']])
        except DatabaseError as exc:
            raise MalformedInput(f"run history is unavailable ({exc}); run `manage.py migrate` first")
        data = RunRecordSerializer(records, many=True).data
        report.result = {'runs': [{k: v for k, v in dict(r).items() if k != 'report'} for r in data]}
        return [runs_table(report.result['runs'])]
