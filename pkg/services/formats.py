"""Loading input files for the `opkit` command.

JSON documents are validated structurally by the serializers in
`api.serializers`, turned into library objects, and then validated
mathematically (`validate()` of the built object). Every failure raises
`ValidationFailed` carrying the full list of problems.

Categories may be referenced from other documents inline, by a path relative
to the referencing file, or by a sample name ("1", "arrow", ...).
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

from api.serializers import (
    ArityPresheafSerializer, CategorySerializer, FunctorSerializer, OperadCandidateSerializer,
    ProfunctorSerializer,
)
from opkit import diagrams
from opkit.errors import MalformedInput, ValidationFailed
from opkit.fincat import FinCategory, SetFunctor, validate_category
from opkit.operads import OperadCandidate, truncated_from_data
from opkit.prof import FiniteProfunctor
from opkit.samples import CATEGORY_NAMES, category as sample_category

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def file_digest(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as fh:
        for chunk in iter(lambda: fh.read(65536), b''):
            digest.update(chunk)
    return digest.hexdigest()


def read_json(path: PathLike) -> Dict:
    try:
        with open(path, encoding='utf-8') as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise MalformedInput(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _flatten(errors, prefix: str = '') -> List[str]:
    if isinstance(errors, dict):
        found = []
        for key, value in errors.items():
            label = '' if key == 'non_field_errors' else str(key)
            found.extend(_flatten(value, f"{prefix}.{label}" if prefix and label else prefix or label))
        return found
    if isinstance(errors, list):
        if all(not isinstance(e, (dict, list)) for e in errors):
            return [f"{prefix}: {e}" if prefix else str(e) for e in errors]
        found = []
        for i, value in enumerate(errors):
            if value:
                found.extend(_flatten(value, f"{prefix}[{i}]"))
        return found
    return [f"{prefix}: {errors}" if prefix else str(errors)]


def validated(serializer_cls, data, what: str) -> Dict:
    serializer = serializer_cls(data=data)
    if not serializer.is_valid():
        raise ValidationFailed(f"invalid {what}", _flatten(serializer.errors))
    return serializer.validated_data


def _check(built, violations: List[str], what: str):
    if violations:
        raise ValidationFailed(f"{what} is not well defined", violations)
    return built


def build_category(data: Dict, name: str = '') -> FinCategory:
    data = validated(CategorySerializer, data, 'category')
    cat = FinCategory.from_table(data, name=name or data.get('name', ''))
    return _check(cat, validate_category(cat), f"category {cat.name or name}")


def resolve_category(ref, base_dir: Path) -> FinCategory:
    if isinstance(ref, dict):
        return build_category(ref)
    if ref in CATEGORY_NAMES:
        return sample_category(ref)
    return load_category(base_dir / ref)


def load_category(path: PathLike) -> FinCategory:
    path = Path(path)
    return build_category(read_json(path), name=path.stem)


def load_functor(path: PathLike) -> SetFunctor:
    path = Path(path)
    data = validated(FunctorSerializer, read_json(path), 'functor')
    cat = resolve_category(data['category'], path.parent)
    functor = SetFunctor(cat, data['variance'], data['sets'], data['maps'], name=data['name'] or path.stem)
    return _check(functor, functor.validate(cat), f"functor {functor.name}")


def load_profunctor(path: PathLike) -> FiniteProfunctor:
    path = Path(path)
    data = validated(ProfunctorSerializer, read_json(path), 'profunctor')
    src = resolve_category(data['src'], path.parent)
    tgt = resolve_category(data['tgt'], path.parent)
    sets = {(cell['src'], cell['tgt']): cell['elements'] for cell in data['sets']}
    left = {(a['morphism'], a['at']): a['map'] for a in data['left']}
    right = {(a['at'], a['morphism']): a['map'] for a in data['right']}
    phi = FiniteProfunctor(src, tgt, sets, left, right, name=data['name'] or path.stem)
    return _check(phi, phi.validate(), f"profunctor {phi.name}")


def build_arity_presheaf(data: Dict, name: str = ''):
    data = validated(ArityPresheafSerializer, data, 'arity presheaf')
    return _arity_presheaf(data, name)


def _arity_presheaf(data: Dict, name: str):
    x = truncated_from_data(data['variant'], data['sets'], data['actions'], data.get('truncation'),
                            finite=data['finite'], name=data['name'] or name)
    return _check(x, x.validate(), f"arity presheaf {x.name}")


def load_arity_presheaf(path: PathLike):
    path = Path(path)
    return build_arity_presheaf(read_json(path), name=path.stem)


def load_operad_candidate(path: PathLike) -> OperadCandidate:
    path = Path(path)
    data = validated(OperadCandidateSerializer, read_json(path), 'operad candidate')
    carrier = _arity_presheaf(data, path.stem)
    entries = [dict(e) for e in data['compose']]
    return OperadCandidate.from_table(carrier, data['unit'], entries, clone=data['form'] == 'clone',
                                      name=data['name'] or path.stem)


def load_diagram(path: PathLike) -> Tuple[diagrams.Diagram, str]:
    """Parse a diagram file; returns the AST and the source text."""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except FileNotFoundError:
        raise MalformedInput(f"no such file: {path}")
    d = diagrams.parse(text)
    logger.debug("loaded diagram %s from %s", diagrams.render(d), path)
    return d, text
