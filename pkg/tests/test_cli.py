"""
End-to-end tests for the command-line front end.

Each test writes description files into a temporary directory, runs
``main`` with stdout captured and checks the exit code and report.
"""

import io
import json
import os
import tempfile
import unittest
from fractions import Fraction
from unittest.mock import patch

from src.cli import build_parser, main
from src.csm import csm_from_table, csm_joinmeet, csm_product
from src.description_parser import csm_to_dict, observable_to_dict, witness_to_dict
from src.effect_algebra import MVChainProduct, TupleEffectAlgebra
from src.observable import identity_observable
from src.witness import witness_from_csm

MO2 = {'kind': 'horizontal-sum', 'blocks': [['a', "a'"], ['b', "b'"]]}
CHAIN = {'kind': 'mv-chain-product', 'orders': [2]}
SCALAR = {'kind': 'tuple', 'dim': 1}


class CLITestCase(unittest.TestCase):
    """Shared helpers: a scratch directory and a stdout-capturing runner."""

    def setUp(self):
        """Set up test fixtures."""
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        """Clean up test fixtures."""
        self._tmp.cleanup()

    def write(self, name, document):
        path = os.path.join(self.tmp, name)
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(document, handle, ensure_ascii=False)
        return path

    def run_cli(self, *argv):
        with patch('sys.stdout', new_callable=io.StringIO) as stdout:
            code = main(list(argv))
        return code, stdout.getvalue()

    def run_json(self, *argv):
        code, output = self.run_cli(*argv, '--format', 'json')
        return code, json.loads(output)


class TestParser(CLITestCase):
    """Test cases for argument parsing."""

    def test_subcommand_required(self):
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit):
                build_parser().parse_args([])

    def test_witness_and_extend_exclusive(self):
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit):
                build_parser().parse_args(['search', '--algebra', 'a.json', '--witness', '--extend', 'w.json'])


class TestValidateCommand(CLITestCase):
    """Test cases for ``validate``."""

    def test_mo2_is_not_mv(self):
        code, output = self.run_cli('validate', '--algebra', self.write('mo2.json', MO2), '--mv')
        self.assertEqual(code, 1)
        self.assertIn('MV-effect algebra: no', output)

    def test_chain_is_mv(self):
        code, document = self.run_json('validate', '--algebra', self.write('chain.json', CHAIN), '--mv')
        self.assertEqual(code, 0)
        self.assertTrue(document['validation']['valid'])
        self.assertTrue(document['mv']['is_mv'])

    def test_malformed_json(self):
        path = os.path.join(self.tmp, 'broken.json')
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write('{"kind": ')
        code, output = self.run_cli('validate', '--algebra', path)
        self.assertEqual(code, 2)
        self.assertIn('invalid JSON', output)

    def test_missing_file(self):
        code, _ = self.run_cli('validate', '--algebra', os.path.join(self.tmp, 'absent.json'))
        self.assertEqual(code, 2)


class TestVerifyCSMCommand(CLITestCase):
    """Test cases for ``verify-csm``."""

    def test_product_fails_strong(self):
        code, document = self.run_json(
            'verify-csm', '--algebra', self.write('scalar.json', SCALAR),
            '--subset', self.write('s.json', {'S': ['1/2']}),
            '--csm', self.write('csm.json', {'kind': 'product'}), '--strong',
        )
        self.assertEqual(code, 1)
        self.assertEqual(document['csm']['statuses']['(e)'], 'holds')
        self.assertEqual(document['csm']['statuses']['(e*)'], 'fails')

    def test_product_without_strong_flag(self):
        code, _ = self.run_cli(
            'verify-csm', '--algebra', self.write('scalar.json', SCALAR),
            '--subset', self.write('s.json', {'S': ['1/2']}),
            '--csm', self.write('csm.json', {'kind': 'product'}),
        )
        self.assertEqual(code, 0)

    def test_joinmeet_passes(self):
        code, output = self.run_cli(
            'verify-csm', '--algebra', self.write('chain.json', {'kind': 'mv-chain-product', 'orders': [2, 2]}),
            '--subset', self.write('s.json', {'S': ['(1/2,0)', '(0,1/2)']}),
            '--csm', self.write('csm.json', {'kind': 'join-meet'}), '--strong',
        )
        self.assertEqual(code, 0)
        self.assertIn('(e*)', output)

    def test_table_with_hole(self):
        algebra = MVChainProduct([2])
        document = csm_to_dict(csm_joinmeet(algebra, [algebra.element('1/2')]))
        document['entries'] = document['entries'][1:]
        code, _ = self.run_cli('verify-csm', '--algebra', self.write('chain.json', CHAIN),
                               '--csm', self.write('csm.json', document))
        self.assertEqual(code, 2)


class TestCoexistCommand(CLITestCase):
    """Test cases for ``coexist``."""

    def test_certificate_written_and_rechecked(self):
        algebra_path = self.write('scalar.json', SCALAR)
        certificate_path = os.path.join(self.tmp, 'cert.json')
        code, _ = self.run_cli(
            'coexist', '--algebra', algebra_path,
            '--subset', self.write('s.json', {'S': ['1/2']}),
            '--csm', self.write('csm.json', {'kind': 'product'}), '--out', certificate_path,
        )
        self.assertEqual(code, 0)
        with open(certificate_path, encoding='utf-8') as handle:
            certificate = json.load(handle)
        self.assertEqual(certificate['boolean_atoms'], 4)
        self.assertEqual(certificate['S'], ['1/2', '1'])

        code, output = self.run_cli('coexist', '--algebra', algebra_path, '--certificate', certificate_path)
        self.assertEqual(code, 0)
        self.assertIn('verified', output)

    def test_unit_only(self):
        code, _ = self.run_cli(
            'coexist', '--algebra', self.write('chain.json', CHAIN),
            '--subset', self.write('s.json', {'S': []}),
            '--csm', self.write('csm.json', {'kind': 'join-meet'}),
        )
        self.assertEqual(code, 0)

    def test_corrupted_table_aborts(self):
        algebra = MVChainProduct([2])
        half = algebra.element('1/2')
        csm = csm_joinmeet(algebra, [half])
        table = csm.table()
        table[(0, 0b11)] = half
        code, output = self.run_cli(
            'coexist', '--algebra', self.write('chain.json', CHAIN),
            '--csm', self.write('csm.json', csm_to_dict(csm_from_table(csm.domain, table))),
        )
        self.assertEqual(code, 1)
        self.assertIn('construction aborted', output)

    def test_needs_csm_or_certificate(self):
        code, _ = self.run_cli('coexist', '--algebra', self.write('chain.json', CHAIN))
        self.assertEqual(code, 2)


class TestReverseCommand(CLITestCase):
    """Test cases for ``reverse``."""

    def test_identity_observable(self):
        out_path = os.path.join(self.tmp, 'table.json')
        code, document = self.run_json(
            'reverse', '--algebra', self.write('b2.json', {'kind': 'mv-chain-product', 'orders': [1, 1]}),
            '--observable', self.write('obs.json', observable_to_dict(identity_observable(2))),
            '--subset', self.write('s.json', {'S': ['(1,0)', '(0,1)']}),
            '--out', out_path, '--all-preimages',
        )
        self.assertEqual(code, 0)
        self.assertEqual(document['strong']['statuses']['(e*)'], 'holds')
        self.assertEqual(document['preimage_sweep'], {'choices': 1, 'strong': 1})
        self.assertTrue(os.path.exists(out_path))

    def test_element_outside_range(self):
        observable = {'atoms': [{'name': 'ω', 'value': '1'}]}
        code, _ = self.run_cli(
            'reverse', '--algebra', self.write('chain.json', CHAIN),
            '--observable', self.write('obs.json', observable),
            '--subset', self.write('s.json', {'S': ['1/2']}),
        )
        self.assertEqual(code, 2)


class TestWitnessCommand(CLITestCase):
    """Test cases for ``witness``."""

    def test_product_witness(self):
        code, document = self.run_json(
            'witness', '--algebra', self.write('scalar.json', SCALAR),
            '--subset', self.write('s.json', {'S': ['1/2']}),
            '--csm', self.write('csm.json', {'kind': 'product'}),
        )
        self.assertEqual(code, 0)
        self.assertTrue(document['d_equality']['holds'])

    def test_non_interval_algebra(self):
        code, _ = self.run_cli(
            'witness', '--algebra', self.write('mo2.json', MO2),
            '--subset', self.write('s.json', {'S': ['a']}),
            '--csm', self.write('csm.json', {'kind': 'join-meet'}),
        )
        self.assertEqual(code, 2)

    def test_perturbed_witness_file(self):
        algebra = TupleEffectAlgebra(1)
        beta = witness_from_csm(csm_product(algebra, [algebra.element('1/2')]))
        perturbed = beta.replace(0b01, (Fraction(1, 4),))
        code, output = self.run_cli(
            'witness', '--algebra', self.write('scalar.json', SCALAR),
            '--subset', self.write('s.json', {'S': ['1/2']}),
            '--csm', self.write('csm.json', {'kind': 'product'}),
            '--witness', self.write('beta.json', witness_to_dict(perturbed)),
        )
        self.assertEqual(code, 1)
        self.assertIn('(A2)', output)


class TestSearchCommand(CLITestCase):
    """Test cases for ``search``."""

    def test_mo2_exhausted(self):
        code, output = self.run_cli(
            'search', '--algebra', self.write('mo2.json', MO2),
            '--subset', self.write('s.json', {'S': ['a', 'b']}),
        )
        self.assertEqual(code, 1)
        self.assertIn('no solution exists', output)

    def test_chain_found_and_logged(self):
        result_log = os.path.join(self.tmp, 'results.jsonl')
        out_path = os.path.join(self.tmp, 'solution.json')
        code, _ = self.run_cli(
            'search', '--algebra', self.write('chain.json', CHAIN),
            '--subset', self.write('s.json', {'S': ['1/2']}),
            '--result-log', result_log, '--out', out_path,
        )
        self.assertEqual(code, 0)
        with open(result_log, encoding='utf-8') as handle:
            records = [json.loads(line) for line in handle]
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0]['outcome'], 'found')
        with open(out_path, encoding='utf-8') as handle:
            self.assertEqual(json.load(handle)['kind'], 'table')

    def test_budget_out_is_inconclusive(self):
        code, output = self.run_cli(
            'search', '--algebra', self.write('chain.json', CHAIN),
            '--subset', self.write('s.json', {'S': ['1/2']}), '--budget-nodes', '1',
        )
        self.assertEqual(code, 3)
        self.assertIn('inconclusive', output)

    def test_witness_mode(self):
        code, document = self.run_json(
            'search', '--algebra', self.write('chain.json', CHAIN),
            '--subset', self.write('s.json', {'S': ['1/2', '1']}), '--witness',
        )
        self.assertEqual(code, 0)
        self.assertIn('solution', document)

    def test_extend_witness(self):
        algebra = MVChainProduct([2])
        beta = witness_from_csm(csm_joinmeet(algebra, [algebra.element('1/2')]))
        code, _ = self.run_cli(
            'search', '--algebra', self.write('chain.json', CHAIN),
            '--extend', self.write('beta.json', witness_to_dict(beta)), '--strong',
        )
        self.assertEqual(code, 0)

    def test_subset_required(self):
        code, _ = self.run_cli('search', '--algebra', self.write('chain.json', CHAIN))
        self.assertEqual(code, 2)


if __name__ == '__main__':
    unittest.main()
