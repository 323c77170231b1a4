"""
Structured tool interfaces and the validation shared by invocation and planning.
"""
import numbers

from analytics.exceptions import ConstraintViolation, DescriptorInvalid, SchemaViolation

from .kinds import KINDS, kind_of

DIRECTED = 'directed'
WEIGHTED = 'weighted'
CONSTRAINTS = (DIRECTED, WEIGHTED)

INT = 'int'
FLOAT = 'float'
BOOL = 'bool'
STR = 'str'
NODE = 'node'
PARAM_TYPES = (INT, FLOAT, BOOL, STR, NODE)


class InputSlot(object):
    def __init__(self, name, kind, constraints=(), required=True, description=''):
        self.name = name
        self.kind = kind
        self.constraints = tuple(constraints)
        self.required = required
        self.description = description

    def to_data(self):
        return {
            'name': self.name,
            'kind': self.kind,
            'constraints': list(self.constraints),
            'required': self.required,
            'description': self.description,
        }

    @classmethod
    def from_data(cls, data):
        return cls(data['name'], data['kind'], data.get('constraints', ()), data.get('required', True),
                   data.get('description', ''))


class ParamSpec(object):
    """
    One tool parameter.

    ``minimum``/``maximum`` bound numeric values; the matching ``exclusive_*``
    flags make a bound open.
    """

    def __init__(self, name, type, default=None, minimum=None, maximum=None, exclusive_minimum=False,
                 exclusive_maximum=False, choices=None, description=''):
        self.name = name
        self.type = type
        self.default = default
        self.minimum = minimum
        self.maximum = maximum
        self.exclusive_minimum = exclusive_minimum
        self.exclusive_maximum = exclusive_maximum
        self.choices = None if choices is None else tuple(choices)
        self.description = description

    def range_text(self):
        if self.choices is not None:
            return 'one of %s' % ', '.join(str(c) for c in self.choices)
        if self.minimum is None and self.maximum is None:
            return self.type
        left = '(' if self.exclusive_minimum else '['
        right = ')' if self.exclusive_maximum else ']'
        low = '-inf' if self.minimum is None else self.minimum
        high = 'inf' if self.maximum is None else self.maximum
        return '%s in %s%s, %s%s' % (self.type, left, low, high, right)

    def type_ok(self, value):
        if self.type == BOOL:
            return isinstance(value, bool)
        if isinstance(value, bool):
            return False
        if self.type == INT:
            return isinstance(value, numbers.Integral) or (isinstance(value, float) and value.is_integer())
        if self.type == FLOAT:
            return isinstance(value, numbers.Real)
        if self.type == STR:
            return isinstance(value, str)
        return isinstance(value, (str, numbers.Integral))

    def coerce(self, value):
        if self.type == INT:
            return int(value)
        if self.type == FLOAT:
            return float(value)
        return value

    def violation(self, value):
        """
        The SchemaViolation ``value`` would raise, or None when it is acceptable.
        """
        if value is None:
            return None
        if not self.type_ok(value):
            return SchemaViolation('parameter %r must be %s, got %r' % (self.name, self.type, value),
                                   field=self.name, expected=self.range_text(), given=value)
        value = self.coerce(value)
        outside = (
            (self.choices is not None and value not in self.choices)
            or (self.minimum is not None
                and (value <= self.minimum if self.exclusive_minimum else value < self.minimum))
            or (self.maximum is not None
                and (value >= self.maximum if self.exclusive_maximum else value > self.maximum))
        )
        if outside:
            return SchemaViolation('parameter %r must be %s, got %r' % (self.name, self.range_text(), value),
                                   field=self.name, expected=self.range_text(), given=value)
        return None

    def to_data(self):
        data = {'name': self.name, 'type': self.type, 'default': self.default, 'description': self.description}
        if self.minimum is not None:
            data['minimum'] = self.minimum
            data['exclusive_minimum'] = self.exclusive_minimum
        if self.maximum is not None:
            data['maximum'] = self.maximum
            data['exclusive_maximum'] = self.exclusive_maximum
        if self.choices is not None:
            data['choices'] = list(self.choices)
        return data

    @classmethod
    def from_data(cls, data):
        return cls(
            data['name'], data['type'], data.get('default'), data.get('minimum'), data.get('maximum'),
            data.get('exclusive_minimum', False), data.get('exclusive_maximum', False), data.get('choices'),
            data.get('description', ''),
        )


class ToolDescriptor(object):
    def __init__(self, name, family, description, inputs, params, output_kind, execution_notes=''):
        self.name = name
        self.family = family
        self.description = description
        self.inputs = list(inputs)
        self.params = list(params)
        self.output_kind = output_kind
        self.execution_notes = execution_notes

    def check(self):
        slot_names = [slot.name for slot in self.inputs]
        if len(set(slot_names)) != len(slot_names):
            raise DescriptorInvalid('%s: input slot names must be unique' % self.name)
        param_names = [p.name for p in self.params]
        if len(set(param_names)) != len(param_names):
            raise DescriptorInvalid('%s: parameter names must be unique' % self.name)
        for slot in self.inputs:
            if slot.kind not in KINDS:
                raise DescriptorInvalid('%s: slot %r has unknown kind %r' % (self.name, slot.name, slot.kind))
            for constraint in slot.constraints:
                if constraint not in CONSTRAINTS:
                    raise DescriptorInvalid('%s: unknown constraint %r' % (self.name, constraint))
        if self.output_kind not in KINDS:
            raise DescriptorInvalid('%s: unknown output kind %r' % (self.name, self.output_kind))
        for param in self.params:
            if param.type not in PARAM_TYPES:
                raise DescriptorInvalid('%s: parameter %r has unknown type %r' % (self.name, param.name, param.type))
            if param.violation(param.default) is not None:
                raise DescriptorInvalid('%s: default %r of %r lies outside %s'
                                        % (self.name, param.default, param.name, param.range_text()))
        return self

    def slot(self, name):
        for slot in self.inputs:
            if slot.name == name:
                return slot
        return None

    def param(self, name):
        for param in self.params:
            if param.name == name:
                return param
        return None

    def defaults(self):
        return {p.name: p.default for p in self.params}

    def param_violations(self, params):
        violations = []
        for name in sorted(params):
            spec = self.param(name)
            if spec is None:
                violations.append(SchemaViolation('%s takes no parameter %r' % (self.name, name),
                                                  field=name, expected=None, given=params[name]))
                continue
            violation = spec.violation(params[name])
            if violation is not None:
                violations.append(violation)
        return violations

    def slot_violations(self, slot_kinds):
        """
        Static checks over a mapping slot name → kind.
        """
        violations = []
        for slot in self.inputs:
            if slot.name not in slot_kinds:
                if slot.required:
                    violations.append(SchemaViolation('%s: input %r is required' % (self.name, slot.name),
                                                      field=slot.name, expected=slot.kind, given=None))
                continue
            if slot_kinds[slot.name] != slot.kind:
                violations.append(SchemaViolation(
                    '%s: input %r must be %s, got %s' % (self.name, slot.name, slot.kind, slot_kinds[slot.name]),
                    field=slot.name, expected=slot.kind, given=slot_kinds[slot.name],
                ))
        for name in sorted(slot_kinds):
            if self.slot(name) is None:
                violations.append(SchemaViolation('%s has no input %r' % (self.name, name),
                                                  field=name, expected=None, given=slot_kinds[name]))
        return violations

    def validate_params(self, params):
        violations = self.param_violations(params or {})
        if violations:
            raise violations[0]
        cleaned = self.defaults()
        for name, value in (params or {}).items():
            cleaned[name] = None if value is None else self.param(name).coerce(value)
        return cleaned

    def validate_inputs(self, inputs):
        violations = self.slot_violations({name: kind_of(value) for name, value in inputs.items()})
        if violations:
            raise violations[0]
        for slot in self.inputs:
            value = inputs.get(slot.name)
            if value is None:
                continue
            if DIRECTED in slot.constraints and not value.directed:
                raise ConstraintViolation('%s requires a directed graph on %r' % (self.name, slot.name),
                                          slot=slot.name, constraint=DIRECTED)
            if WEIGHTED in slot.constraints and not value.weighted:
                raise ConstraintViolation('%s requires a weighted input on %r' % (self.name, slot.name),
                                          slot=slot.name, constraint=WEIGHTED)
        return inputs

    def to_data(self):
        return {
            'name': self.name,
            'family': self.family,
            'description': self.description,
            'inputs': [slot.to_data() for slot in self.inputs],
            'params': [param.to_data() for param in self.params],
            'output_kind': self.output_kind,
            'execution_notes': self.execution_notes,
        }

    @classmethod
    def from_data(cls, data):
        return cls(
            data['name'], data['family'], data.get('description', ''),
            [InputSlot.from_data(s) for s in data.get('inputs', ())],
            [ParamSpec.from_data(p) for p in data.get('params', ())],
            data['output_kind'], data.get('execution_notes', ''),
        )
