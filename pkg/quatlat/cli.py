"""Main CLI interface for quatlat."""

import argparse
import random
import sys
from typing import Any, Dict, List, Optional

from . import __version__
from .algebra.orders import is_right_ideal, module_from_zbasis, module_index, random_principal_right_ideal
from .core.config import ConfigManager
from .core.errors import PreconditionError, QuatLatError
from .core.validation import ValidationResult, failures
from .lattice.ideal_lattice import (
    IdealLattice,
    MinimalVectorSet,
    build_gram,
    build_lattice,
    embedding_max_error,
    generator_matrix_real,
    is_well_rounded,
    min_lower_bound,
    minimal_vectors,
    rational_root_type,
    similarity_certificate,
)
from .lattice.unit_group import (
    GroupClass,
    GroupVariant,
    PresentationGenerators,
    classification_table,
    classify,
    enumerate_norm_one,
    explicit_ideal_basis,
    explicit_minimal_basis,
    find_presentation_generators,
    predict_well_rounded,
    spans_Q_basis,
    verify_presentation,
    wellrounded_consistency,
)
from .utils.problem import Problem, build_problem, load_problem, parse_alpha
from .utils.serialize import dump_json

# group orders each field degree must produce in the classification table
EXPECTED_TABLE_ORDERS = {
    1: {24, 8, 12},
    2: {48, 120, 16, 20, 24},
    3: {28, 36},
}


class QuatLatCLI:
    """Command line application for ideal lattices of quaternion orders."""

    def __init__(self):
        self.config_manager: Optional[ConfigManager] = None
        self.verbose = False

    def _initialize(self, config_file: Optional[str] = None):
        self.config_manager = ConfigManager(config_file)

    @property
    def config(self):
        return self.config_manager.config

    # diagnostics

    def _step(self, number: int, total: int, message: str):
        if self.verbose:
            print(f"Step {number}/{total}: {message}", file=sys.stderr)

    def _report(self, checks: List[ValidationResult]):
        for check in checks:
            print(check, file=sys.stderr)

    def _emit(self, document: Dict[str, Any], indent: Optional[int] = None):
        if indent is None:
            indent = self.config.output.json_indent
        print(dump_json(document, indent))

    def _budget(self, args) -> int:
        if getattr(args, 'budget', None) is not None:
            return args.budget
        return self.config.enumeration.budget

    def _load(self, path: str, alpha_text: Optional[str] = None) -> Problem:
        spec = load_problem(path)
        alpha = parse_alpha(alpha_text, spec.field.degree) if alpha_text else None
        problem = build_problem(spec, alpha=alpha, debug_checks=self.config.debug_checks)
        if problem.ideal is not None and not is_right_ideal(problem.ideal, problem.order):
            raise PreconditionError(f"{spec.name}: the ideal is not a right ideal of the order")
        return problem

    def _provenance(self, *problems: Problem) -> Dict[str, Any]:
        return {
            'version': __version__,
            'inputs': [
                {'source': p.spec.source, 'sha256': p.spec.digest} for p in problems
            ],
        }

    # commands

    def analyze(self, args) -> int:
        """Run the full pipeline on one problem document."""
        total = 8
        delta = self.config_manager.lll_delta()
        budget = self._budget(args)
        checks: List[ValidationResult] = []

        self._step(1, total, f"Loading {args.spec}")
        problem = self._load(args.spec, args.alpha)
        module = problem.lattice_module
        kind = 'ideal' if problem.ideal is not None else 'order'

        self._step(2, total, f"Building the {kind} lattice")
        lattice = build_lattice(module, problem.alpha)

        self._step(3, total, "Computing minimal vectors")
        vectors = minimal_vectors(lattice, delta, budget)
        well_rounded, witness = is_well_rounded(lattice, vectors)
        bound = min_lower_bound(lattice, vectors.min_norm)
        checks.append(ValidationResult(
            "lower bound", bound.holds, f"minimum^n = {bound.lhs}, bound = {bound.rhs}",
        ))

        document: Dict[str, Any] = {
            'name': problem.spec.name,
            'lattice': kind,
            'alpha': problem.alpha,
            'dimension': lattice.dimension,
            'field_degree': lattice.field_degree,
            'gram': lattice.gram,
            'det': lattice.det(),
            'minimum': vectors.min_norm,
            'minimal_vector_count': vectors.count,
            'well_rounded': well_rounded,
            'witness_basis': witness,
            'lower_bound_check': {
                'degree': bound.degree,
                'alpha_norm': bound.alpha_norm,
                'ideal_norm': bound.ideal_norm,
                'lhs': bound.lhs,
                'rhs': bound.rhs,
                'holds': bound.holds,
                'tight': bound.tight,
            },
        }
        if lattice.field_degree == 1:
            document['root_lattice_type'] = rational_root_type(lattice, vectors)

        self._step(4, total, "Enumerating the norm one group of the order")
        group = enumerate_norm_one(problem.order, delta, budget)
        group_class = classify(group)
        gens = self._presentation(problem, group, group_class)
        predicted = predict_well_rounded(lattice.field_degree, group_class)
        document['unit_group'] = {
            'order': group.order,
            'class': group_class.variant.value,
            'name': str(group_class),
            'm': group_class.m,
            'generators': {k: v for k, v in (('x', gens.x), ('y', gens.y), ('z', gens.z)) if v is not None},
            'spans_Q_basis': spans_Q_basis(group),
        }
        document['predicted_well_rounded'] = predicted

        self._step(5, total, "Cross-checking well-roundedness")
        document['consistency'] = None
        if problem.alpha.is_rational():
            order_vectors = vectors if problem.ideal is None else None
            report = wellrounded_consistency(problem.order, problem.alpha, group, order_vectors, delta, budget)
            document['consistency'] = report.to_dict()
            checks.extend(report.checks())
            if problem.ideal is not None and report.direct:
                checks.append(ValidationResult(
                    "ideal inherits well-roundedness", well_rounded, f"ideal lattice well-rounded={well_rounded}",
                ))

        self._step(6, total, "Building the explicit basis of minimal vectors")
        document['explicit_basis'] = self._explicit_basis(problem, lattice, vectors, group_class, gens, predicted)

        self._step(7, total, "Comparing with the order lattice")
        if problem.ideal is not None:
            order_lattice = build_lattice(problem.order, problem.alpha)
            certificate = similarity_certificate(order_lattice, lattice, delta=delta, budget=budget,
                                                 second_vectors=vectors)
            document['similarity_to_order'] = certificate.to_dict()

        self._step(8, total, "Embedding")
        embed = args.embed or self.config.output.embed
        if embed:
            bits = args.precision or self.config.output.precision_bits
            matrix = generator_matrix_real(lattice, bits)
            error = embedding_max_error(lattice, matrix)
            document['embedding'] = {
                'precision_bits': bits,
                'matrix': matrix.tolist(),
                'max_error': error,
            }
            checks.append(ValidationResult("embedding isometry", error < 1e-9, f"max |MM^T - G| = {error:.3e}"))

        document['checks'] = [c.to_dict() for c in checks]
        document['provenance'] = self._provenance(problem)
        self._report(checks)
        self._emit(document, args.json_indent)
        return 0 if not failures(checks) else 1

    def _presentation(self, problem: Problem, group, group_class: GroupClass) -> PresentationGenerators:
        if problem.generators:
            supplied = PresentationGenerators(
                group_class, problem.generators['y'],
                problem.generators.get('x'), problem.generators.get('z'),
            )
            return verify_presentation(group, group_class, supplied)
        return find_presentation_generators(group, group_class)

    def _explicit_basis(self, problem: Problem, lattice: IdealLattice, vectors: MinimalVectorSet,
                        group_class: GroupClass, gens: PresentationGenerators,
                        predicted: bool) -> Optional[Dict[str, Any]]:
        if not predicted or group_class.variant == GroupVariant.CYCLIC:
            return None
        if problem.ideal is None:
            elems = explicit_minimal_basis(problem.order, group_class, gens)
        else:
            elems = explicit_ideal_basis(lattice, vectors, group_class, gens)
        gram = build_gram(problem.algebra, lattice.alpha, elems)
        lattice_of_basis = build_lattice(module_from_zbasis(problem.algebra, elems), lattice.alpha)
        return {
            'elements': elems,
            'gram': gram,
            'det': lattice_of_basis.det(),
            'equals_module': lattice_of_basis.module == lattice.module,
        }

    def table1(self, args) -> int:
        """Regenerate the table of norm one groups giving well-rounded order lattices."""
        checks = []
        print(f"{'n':>2}  {'group':<20} {'order':>5}  {'algebra':<22} field")
        for degree in range(1, args.max_degree + 1):
            rows = classification_table(degree)
            for row in rows:
                print(f"{row.degree:>2}  {str(row.group_class):<20} {row.order:>5}  {row.algebra:<22} {row.field}")
            expected = EXPECTED_TABLE_ORDERS.get(degree)
            if expected is not None:
                found = {row.order for row in rows}
                checks.append(ValidationResult(
                    f"degree {degree} orders", found == expected,
                    f"found {sorted(found)}",
                    details=None if found == expected else f"expected {sorted(expected)}",
                ))
        self._report(checks)
        return 0 if not failures(checks) else 1

    def compare(self, args) -> int:
        """Try to certify that two lattices are not similar."""
        delta = self.config_manager.lll_delta()
        budget = self._budget(args)
        first = self._load(args.spec_a, args.alpha)
        second = self._load(args.spec_b, args.alpha)
        first_lattice = build_lattice(first.lattice_module, first.alpha)
        second_lattice = build_lattice(second.lattice_module, second.alpha)
        certificate = similarity_certificate(first_lattice, second_lattice, delta=delta, budget=budget)
        print(f"{first.spec.name} vs {second.spec.name}: {certificate.verdict.value}")
        print(f"  det ratio:       {certificate.det_ratio}")
        print(f"  forced r:        {certificate.forced_scale}")
        print(f"  forced minimum:  {certificate.forced_minimum}")
        print(f"  reason:          {certificate.reason}")
        return 0

    def ideals(self, args) -> int:
        """Search random principal right ideals of the order and report their lattices."""
        delta = self.config_manager.lll_delta()
        budget = self._budget(args)
        problem = self._load(args.spec, args.alpha)
        order = problem.order
        rng = random.Random(args.seed)

        order_lattice = build_lattice(order, problem.alpha)
        order_wr, _ = is_well_rounded(order_lattice, minimal_vectors(order_lattice, delta, budget))
        group_class = classify(enumerate_norm_one(order, delta, budget))
        qualifies = predict_well_rounded(order.algebra.field.degree, group_class)

        results = []
        checks = []
        for k in range(args.count):
            self._step(k + 1, args.count, "Sampling a right ideal")
            x, ideal = random_principal_right_ideal(order, rng)
            lattice = build_lattice(ideal, problem.alpha)
            vectors = minimal_vectors(lattice, delta, budget)
            wr, _ = is_well_rounded(lattice, vectors)
            bound = min_lower_bound(lattice, vectors.min_norm)
            checks.append(ValidationResult(f"ideal {k} lower bound", bound.holds, f"{bound.lhs} >= {bound.rhs}"))
            if order_wr:
                checks.append(ValidationResult(f"ideal {k} inherits well-roundedness", wr, str(wr)))
            results.append({
                'generator': x,
                'index': module_index(ideal, order),
                'minimum': vectors.min_norm,
                'minimal_vector_count': vectors.count,
                'lower_bound_holds': bound.holds,
                'well_rounded': wr,
            })

        document = {
            'name': problem.spec.name,
            'order_well_rounded': order_wr,
            'group_class': str(group_class),
            'order_qualifies': qualifies,
            'ideals': results,
            # well-rounded ideals of an order without a qualifying group would be
            # counterexamples to the converse, which is an open question
            'well_rounded_ideals_of_non_qualifying_order': (
                sum(1 for r in results if r['well_rounded']) if not qualifies else None
            ),
            'provenance': self._provenance(problem),
        }
        self._report(checks)
        self._emit(document, args.json_indent)
        return 0 if not failures(checks) else 1

    def config_init(self, args) -> int:
        """Write the effective configuration to a file."""
        output = args.output or 'quatlat.yaml'
        self.config_manager.save_config(output)
        print(f"Configuration written to {output}")
        return 0

    def config_show(self, args) -> int:
        """Show current configuration."""
        config = self.config
        print("Current Configuration:")
        print(f"  Config file: {self.config_manager.config_file or 'defaults'}")
        print(f"  Enumeration budget: {config.enumeration.budget}")
        print(f"  LLL delta: {config.enumeration.lll_delta}")
        print(f"  JSON indent: {config.output.json_indent}")
        print(f"  Precision bits: {config.output.precision_bits}")
        print(f"  Embed: {config.output.embed}")
        print(f"  Debug checks: {config.debug_checks}")
        print(f"  Fixtures: {config.fixtures_dir}")
        return 0

    def create_parser(self):
        """Create argument parser."""
        parser = argparse.ArgumentParser(
            prog='quatlat',
            description='Ideal lattices from totally definite quaternion algebras',
            formatter_class=argparse.RawDescriptionHelpFormatter
        )

        parser.add_argument('--config', '-c', help='Configuration file path')
        parser.add_argument('--verbose', '-v', action='store_true', help='Verbose output')
        parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

        subparsers = parser.add_subparsers(dest='command', help='Available commands')

        def add_common(sub):
            sub.add_argument('--alpha', help='Scaling element: "p/q" or comma-separated coefficients')
            sub.add_argument('--budget', type=int, help='Enumeration node budget')
            sub.add_argument('--json-indent', type=int, dest='json_indent', help='JSON indentation')

        # Analyze
        analyze_parser = subparsers.add_parser('analyze', help='Analyze an order or ideal lattice')
        analyze_parser.add_argument('spec', help='Problem document (YAML)')
        analyze_parser.add_argument('--embed', action='store_true', help='Include the real generator matrix')
        analyze_parser.add_argument('--precision', type=int, help='Precision bits for --embed')
        add_common(analyze_parser)
        analyze_parser.set_defaults(func=self.analyze)

        # Table
        table_parser = subparsers.add_parser('table1', help='Regenerate the classification table')
        table_parser.add_argument('--max-degree', type=int, default=3, dest='max_degree',
                                  help='Largest field degree to list')
        table_parser.set_defaults(func=self.table1)

        # Compare
        compare_parser = subparsers.add_parser('compare', help='Non-similarity certificate for two lattices')
        compare_parser.add_argument('spec_a', help='First problem document')
        compare_parser.add_argument('spec_b', help='Second problem document')
        add_common(compare_parser)
        compare_parser.set_defaults(func=self.compare)

        # Ideals
        ideals_parser = subparsers.add_parser('ideals', help='Sample principal right ideals of an order')
        ideals_parser.add_argument('spec', help='Problem document (YAML)')
        ideals_parser.add_argument('--count', type=int, default=10, help='Number of ideals')
        ideals_parser.add_argument('--seed', type=int, default=0, help='Random seed')
        add_common(ideals_parser)
        ideals_parser.set_defaults(func=self.ideals)

        # Config commands
        config_parser = subparsers.add_parser('config', help='Configuration management')
        config_subparsers = config_parser.add_subparsers(dest='config_command')

        config_init_parser = config_subparsers.add_parser('init', help='Initialize configuration')
        config_init_parser.add_argument('--output', '-o', help='Output file path')
        config_init_parser.set_defaults(func=self.config_init)

        config_show_parser = config_subparsers.add_parser('show', help='Show configuration')
        config_show_parser.set_defaults(func=self.config_show)

        return parser

    def run(self, args: Optional[List[str]] = None) -> int:
        """Run CLI application and return the process exit status."""
        parser = self.create_parser()
        args = parser.parse_args(args)
        self.verbose = args.verbose

        if not args.command:
            parser.print_help()
            return 0

        if args.command == 'config' and not hasattr(args, 'func'):
            parser.parse_args([args.command, '--help'])
            return 0

        try:
            self._initialize(args.config)
            return args.func(args)
        except KeyboardInterrupt:
            print("\nOperation cancelled", file=sys.stderr)
            return 130
        except QuatLatError as e:
            if args.verbose:
                import traceback
                traceback.print_exc()
            else:
                print(f"Error: {e}", file=sys.stderr)
            return e.exit_code
        except Exception as e:
            if args.verbose:
                import traceback
                traceback.print_exc()
            else:
                print(f"Error: {e}", file=sys.stderr)
            return 1


def main():
    """Main entry point."""
    cli = QuatLatCLI()
    sys.exit(cli.run())
