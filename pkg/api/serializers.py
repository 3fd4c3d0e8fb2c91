"""Serializers validating the JSON input formats and the run history.

Input serializers check structure only (field types, required keys,
references between fields). Mathematical validity (functoriality,
composition tables) is checked by the library once the data is built; see
`services.formats`.
"""

from rest_framework import serializers

from opkit.diagrams import FiniteFunction, Variant
from opkit.errors import MalformedInput

from .models import RunRecord


class RunRecordSerializer(serializers.ModelSerializer):
    witness_count = serializers.IntegerField(read_only=True)

    class Meta:
        model = RunRecord
        fields = ['id', 'command', 'outcome', 'exit_code', 'seed', 'schema', 'witness_count', 'created_at', 'report']


class MorphismSerializer(serializers.Serializer):
    id = serializers.CharField()
    src = serializers.CharField()
    tgt = serializers.CharField()


class CategorySerializer(serializers.Serializer):
    name = serializers.CharField(required=False, default='')
    objects = serializers.ListField(child=serializers.CharField(), allow_empty=True)
    morphisms = MorphismSerializer(many=True)
    identity = serializers.DictField(child=serializers.CharField())
    compose = serializers.ListField(
        child=serializers.ListField(child=serializers.CharField(), min_length=3, max_length=3),
        required=False, default=list,
    )
    generators = serializers.ListField(child=serializers.CharField(), required=False)

    def validate(self, data):
        objects = set(data['objects'])
        ids = [m['id'] for m in data['morphisms']]
        if len(set(ids)) != len(ids):
            raise serializers.ValidationError("morphism ids must be unique")
        for m in data['morphisms']:
            if m['src'] not in objects or m['tgt'] not in objects:
                raise serializers.ValidationError(f"morphism {m['id']} has an unknown endpoint")
        if set(data['identity']) != objects:
            raise serializers.ValidationError("identity must name one morphism per object")
        known = set(ids)
        for obj, mor in data['identity'].items():
            if mor not in known:
                raise serializers.ValidationError(f"identity of {obj} is not a listed morphism")
        for triple in data['compose']:
            unknown = [m for m in triple if m not in known]
            if unknown:
                raise serializers.ValidationError(f"compose entry {triple} names unknown morphisms {unknown}")
        for g in data.get('generators', []):
            if g not in known:
                raise serializers.ValidationError(f"generator {g} is not a listed morphism")
        return data


class CategoryRefField(serializers.JSONField):
    """A category given inline, by a path relative to the file, or by a sample name."""

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if isinstance(value, str):
            return value
        if isinstance(value, dict):
            nested = CategorySerializer(data=value)
            nested.is_valid(raise_exception=True)
            return nested.validated_data
        raise serializers.ValidationError("expected a category object or a path")


class FunctorSerializer(serializers.Serializer):
    category = CategoryRefField()
    variance = serializers.ChoiceField(choices=['covariant', 'contravariant'], default='contravariant')
    name = serializers.CharField(required=False, default='')
    sets = serializers.DictField(child=serializers.ListField(child=serializers.CharField(), allow_empty=True))
    maps = serializers.DictField(child=serializers.DictField(child=serializers.CharField()), required=False,
                                 default=dict)


class ProfunctorCellSerializer(serializers.Serializer):
    src = serializers.CharField()
    tgt = serializers.CharField()
    elements = serializers.ListField(child=serializers.CharField(), allow_empty=True)


class ProfunctorActionSerializer(serializers.Serializer):
    morphism = serializers.CharField()
    at = serializers.CharField()
    map = serializers.DictField(child=serializers.CharField())


class ProfunctorSerializer(serializers.Serializer):
    src = CategoryRefField()
    tgt = CategoryRefField()
    name = serializers.CharField(required=False, default='')
    sets = ProfunctorCellSerializer(many=True)
    left = ProfunctorActionSerializer(many=True, required=False, default=list)
    right = ProfunctorActionSerializer(many=True, required=False, default=list)


def _variant(value: str) -> Variant:
    try:
        return Variant.parse(value)
    except MalformedInput as exc:
        raise serializers.ValidationError(str(exc))


class ArityPresheafSerializer(serializers.Serializer):
    variant = serializers.CharField()
    name = serializers.CharField(required=False, default='')
    truncation = serializers.IntegerField(min_value=0, required=False)
    finite = serializers.BooleanField(required=False, default=False)
    sets = serializers.DictField(child=serializers.ListField(child=serializers.CharField(), allow_empty=True))
    actions = serializers.DictField(child=serializers.DictField(child=serializers.CharField()), required=False,
                                    default=dict)

    def validate_variant(self, value):
        variant = _variant(value)
        if not variant.monad_enabled:
            raise serializers.ValidationError(f"variant {variant.label} has no arity presheaves")
        return value

    def validate_sets(self, value):
        for key in value:
            if not key.isdigit():
                raise serializers.ValidationError(f"arity keys must be natural numbers, got {key!r}")
        return value

    def validate_actions(self, value):
        for key in value:
            try:
                FiniteFunction.from_descriptor(key)
            except MalformedInput as exc:
                raise serializers.ValidationError(str(exc))
        return value


class CompositeEntrySerializer(serializers.Serializer):
    outer = serializers.CharField()
    inner = serializers.ListField(child=serializers.CharField(), allow_empty=True)
    result = serializers.CharField()
    arities = serializers.ListField(child=serializers.IntegerField(min_value=0), required=False)
    arity = serializers.IntegerField(min_value=0, required=False)


class OperadCandidateSerializer(ArityPresheafSerializer):
    unit = serializers.CharField()
    form = serializers.ChoiceField(choices=['operad', 'clone'], default='operad')
    compose = CompositeEntrySerializer(many=True)

    def validate(self, data):
        if data['form'] == 'clone' and not _variant(data['variant']).is_cartesian:
            raise serializers.ValidationError("clone-form multiplication needs the cartesian variant")
        if data['unit'] not in data['sets'].get('1', []):
            raise serializers.ValidationError(f"unit {data['unit']!r} is not listed at arity 1")
        return data
