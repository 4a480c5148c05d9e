"""
Loading and writing of the JSON description files.

Algebras, subsets, CSMs, observables, witness mappings and certificates are
all plain JSON documents; rationals are written as "p/q" strings and
vectors as "(p/q,...)" strings or JSON lists.
"""

import json
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from .boolean_algebra import PowersetAlgebra, mask_positions
from .config import CoexistenceConfig
from .csm import CSM, CSMDomain, csm_from_table, csm_joinmeet, csm_product
from .effect_algebra import (
    EffectAlgebra,
    MVChainProduct,
    TableEffectAlgebra,
    TupleEffectAlgebra,
    horizontal_sum,
)
from .errors import InputError
from .observable import Observable
from .witness import WitnessMapping


class DescriptionParser:
    """
    Turns description documents into library objects.

    Every structural problem is reported as an InputError naming the
    offending field.
    """

    def __init__(self, config: CoexistenceConfig):
        """Initialize the parser with configuration."""
        self.config = config

    def load_json(self, path: str) -> Any:
        """
        Read a JSON document.

        Raises:
            InputError: If the file cannot be read or is not valid JSON;
                        parse errors carry line and column.
        """
        try:
            with open(path, encoding='utf-8') as handle:
                text = handle.read()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror or e}", {'path': path}) from e
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(
                f"{path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}",
                {'path': path, 'line': e.lineno, 'column': e.colno},
            ) from e

    @staticmethod
    def _field(data: Any, name: str, kind: type, where: str) -> Any:
        if not isinstance(data, dict):
            raise InputError(f"{where} must be a JSON object")
        if name not in data:
            raise InputError(f"{where} is missing field {name!r}")
        value = data[name]
        if not isinstance(value, kind):
            raise InputError(f"{where} field {name!r} must be of type {kind.__name__}")
        return value

    def parse_algebra(self, data: Any) -> EffectAlgebra:
        kind = self._field(data, 'kind', str, 'algebra')
        if kind == 'table':
            embedding = data.get('embedding')
            if embedding is not None and not isinstance(embedding, dict):
                raise InputError("algebra field 'embedding' must map element identifiers to vectors")
            return TableEffectAlgebra(
                elements=[str(e) for e in self._field(data, 'elements', list, 'algebra')],
                sums=self._field(data, 'sum', list, 'algebra'),
                zero=str(self._field(data, 'zero', str, 'algebra')),
                unit=str(self._field(data, 'unit', str, 'algebra')),
                embedding=embedding,
                name=str(data.get('name', 'table')),
            )
        if kind == 'tuple':
            return TupleEffectAlgebra(self._field(data, 'dim', int, 'algebra'))
        if kind == 'mv-chain-product':
            return MVChainProduct(self._field(data, 'orders', list, 'algebra'))
        if kind == 'horizontal-sum':
            return horizontal_sum(self._field(data, 'blocks', list, 'algebra'),
                                  name=str(data.get('name', 'horizontal sum')))
        raise InputError(f"unknown algebra kind {kind!r}")

    def parse_elements(self, raw: Sequence[Any], algebra: EffectAlgebra) -> List[Hashable]:
        return [algebra.parse_element(item) for item in raw]

    def parse_subset(self, data: Any, algebra: EffectAlgebra) -> List[Hashable]:
        return self.parse_elements(self._field(data, 'S', list, 'subset'), algebra)

    def parse_csm(self, data: Any, algebra: EffectAlgebra, elements: Optional[Sequence[Hashable]]) -> CSM:
        """
        Build a CSM from its description; closed forms take S from the subset file.

        Raises:
            InputError: If the kind is unknown, S is missing, or a table is not total
        """
        kind = self._field(data, 'kind', str, 'csm')
        if kind in ('join-meet', 'product'):
            if elements is None:
                raise InputError(f"a {kind} CSM needs a subset file")
            build = csm_joinmeet if kind == 'join-meet' else csm_product
            return build(algebra, elements)
        if kind != 'table':
            raise InputError(f"unknown csm kind {kind!r}")
        members = self.parse_elements(self._field(data, 'S', list, 'csm'), algebra)
        if elements is not None and set(elements) - set(members):
            raise InputError("subset file lists elements that the CSM table does not cover")
        domain = CSMDomain(algebra, members)
        values: Dict[Tuple[int, int], Hashable] = {}
        for entry in self._field(data, 'entries', list, 'csm'):
            u = domain.mask_of(self.parse_elements(self._field(entry, 'U', list, 'csm entry'), algebra))
            v = domain.mask_of(self.parse_elements(self._field(entry, 'V', list, 'csm entry'), algebra))
            if 'value' not in entry:
                raise InputError("csm entry is missing field 'value'")
            if (u, v) in values:
                raise InputError(f"csm table lists ⟨{domain.names(u)}|{domain.names(v)}⟩ twice")
            values[(u, v)] = algebra.parse_element(entry['value'])
        return csm_from_table(domain, values)

    def parse_observable(self, data: Any, algebra: EffectAlgebra) -> Observable:
        atoms = self._field(data, 'atoms', list, 'observable')
        names = [str(self._field(atom, 'name', str, 'observable atom')) for atom in atoms]
        values = []
        for atom in atoms:
            if 'value' not in atom:
                raise InputError(f"observable atom {atom.get('name')!r} is missing field 'value'")
            values.append(algebra.parse_element(atom['value']))
        boolean = PowersetAlgebra(names)
        index = {name: i for i, name in enumerate(names)}
        overrides = {}
        entries = data.get('values', [])
        if not isinstance(entries, list):
            raise InputError("observable field 'values' must be of type list")
        for entry in entries:
            bits = 0
            for name in self._field(entry, 'atoms', list, 'observable value'):
                if not isinstance(name, str) or name not in index:
                    raise InputError(f"observable value mentions unknown atom {name!r}")
                bits |= 1 << index[name]
            if 'value' not in entry:
                raise InputError("observable value is missing field 'value'")
            overrides[bits] = algebra.parse_element(entry['value'])
        return Observable(boolean, algebra, values, overrides, name=str(data.get('name', 'observable')))

    def parse_witness(self, data: Any, algebra: EffectAlgebra) -> WitnessMapping:
        members = self.parse_elements(self._field(data, 'S', list, 'witness'), algebra)
        domain = CSMDomain(algebra, members, adjoin_unit=False)
        values: Dict[int, Hashable] = {}
        for entry in self._field(data, 'values', list, 'witness'):
            x = domain.mask_of(self.parse_elements(self._field(entry, 'X', list, 'witness value'), algebra))
            if 'value' not in entry:
                raise InputError("witness value is missing field 'value'")
            values[x] = algebra.parse_element(entry['value'])
        return WitnessMapping(algebra, members, values)


def csm_to_dict(csm: CSM) -> Dict[str, Any]:
    """Serialize any CSM as a total table, entries in (U, V) mask order."""
    domain, algebra = csm.domain, csm.algebra
    return {
        'kind': 'table',
        'S': domain.element_names(),
        'entries': [
            {'U': domain.names(u), 'V': domain.names(v), 'value': algebra.format_element(value)}
            for (u, v), value in sorted(csm.table().items())
        ],
    }


def witness_to_dict(beta: WitnessMapping) -> Dict[str, Any]:
    domain, algebra = beta.domain, beta.algebra
    return {
        'S': domain.element_names(),
        'values': [
            {'X': domain.names(x), 'value': algebra.format_element(beta.value(x))}
            for x in domain.subsets()
        ],
    }


def observable_to_dict(observable: Observable) -> Dict[str, Any]:
    codomain = observable.codomain
    return {
        'name': observable.name,
        'atoms': [
            {'name': label, 'value': codomain.format_element(value)}
            for label, value in zip(observable.domain.atom_labels, observable.atom_values)
        ],
        'values': [
            {'atoms': [observable.domain.atom_labels[i] for i in mask_positions(x)],
             'value': codomain.format_element(value)}
            for x, value in sorted(observable.overrides.items())
        ],
    }


def write_json(path: str, document: Any) -> None:
    try:
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(document, handle, indent=2, ensure_ascii=False)
            handle.write('\n')
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror or e}", {'path': path}) from e
