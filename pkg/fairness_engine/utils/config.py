import copy
import yaml
from typing import Any, Dict, Union, List, Optional
from .errors import ConfigError

# children of these keys are user-named and validated against a template instead of base.yaml
TEMPLATED_SECTIONS = {"agents": "agent_defaults"}
# these mappings are replaced wholesale, their keys are user-named
OPEN_MAPPINGS = {"synthetic.features"}


class ConfigNode:
    def __init__(self, data: Union[Dict[str, Any], List[Any]]):
        self._data = {}
        self.raw = data

        if isinstance(data, dict):
            for key, value in data.items():
                self._data[key] = self._process_value(value)
        elif isinstance(data, list):
            self._data = [self._process_value(item) for item in data]
        else:
            self._data = data

    def _process_value(self, value: Any) -> Union['ConfigNode', Any]:
        """
        Wrap nested mappings recursively.
        """
        if isinstance(value, dict):
            return ConfigNode(value)
        elif isinstance(value, list):
            return [self._process_value(item) for item in value]
        else:
            return value

    def __getattr__(self, name: str) -> Union['ConfigNode', Any]:
        if name.startswith("_"):
            raise AttributeError(name)
        if name in self._data:
            return self._data[name]
        raise AttributeError(f"'ConfigNode' object has no attribute '{name}'")

    def __getitem__(self, key: Union[str, int]) -> Union['ConfigNode', Any]:
        if isinstance(self._data, dict) and key in self._data:
            return self._data[key]
        elif isinstance(self._data, list) and isinstance(key, int):
            return self._data[key]
        raise KeyError(f"Key or index '{key}' not found in ConfigNode")

    def __contains__(self, key: str) -> bool:
        return isinstance(self._data, dict) and key in self._data

    def get(self, key: str, default: Any = None) -> Any:
        if isinstance(self._data, dict):
            return self._data.get(key, default)
        return default

    def keys(self) -> List[str]:
        return list(self._data.keys()) if isinstance(self._data, dict) else []

    def __repr__(self) -> str:
        if isinstance(self._data, dict):
            return f"<ConfigNode: {list(self._data.keys())}>"
        elif isinstance(self._data, list):
            return f"<ConfigNode: List of length {len(self._data)}>"
        else:
            return f"<ConfigNode: {self._data}>"


def _merge(user: Dict[str, Any], default: Dict[str, Any], prefix: str) -> Dict[str, Any]:
    merged = copy.deepcopy(default)
    for key, value in user.items():
        path = f"{prefix}{key}"
        if key not in default:
            raise ConfigError(path, "unknown key")
        if value is None and isinstance(default[key], dict):
            continue
        if path in OPEN_MAPPINGS:
            if not isinstance(value, dict):
                raise ConfigError(path, "expected a mapping")
            merged[key] = copy.deepcopy(value)
            continue
        if isinstance(default[key], dict) and default[key] and not isinstance(value, dict):
            raise ConfigError(path, "expected a mapping")
        if isinstance(default[key], dict) and isinstance(value, dict) and default[key]:
            merged[key] = _merge(value, default[key], f"{path}.")
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def merge_config(user: Optional[Dict[str, Any]], default: Dict[str, Any]) -> Dict[str, Any]:
    """
    Deep-merge a user config over the defaults. Every user key must exist in the
    defaults; sections listed in ``TEMPLATED_SECTIONS`` are checked entry by entry
    against their template.
    """
    user = dict(user or {})
    templated = {}
    for section, template_key in TEMPLATED_SECTIONS.items():
        if section in user:
            entries = user.pop(section) or {}
            if not isinstance(entries, dict):
                raise ConfigError(section, "expected a mapping of name -> settings")
            templated[section] = entries
    for template_key in TEMPLATED_SECTIONS.values():
        if template_key in user and user[template_key] == default.get(template_key):
            user.pop(template_key)
        elif template_key in user:
            raise ConfigError(template_key, "template section cannot be overridden")

    merged = _merge(user, default, "")
    for section, template_key in TEMPLATED_SECTIONS.items():
        template = default.get(template_key, {})
        resolved = {}
        for name, entry in templated.get(section, {}).items():
            if not isinstance(entry, dict):
                raise ConfigError(f"{section}.{name}", "expected a mapping")
            resolved[str(name)] = _merge(entry, template, f"{section}.{name}.")
        if section in templated or section not in merged:
            merged[section] = resolved
    return merged


def read_yaml(path: str) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        raw_data = yaml.safe_load(f)
    if raw_data is None:
        return {}
    if not isinstance(raw_data, dict):
        raise ConfigError(str(path), "top level of a config file must be a mapping")
    return raw_data


def apply_overrides(raw: Dict[str, Any], overrides: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """Set dotted keys such as ``run.seed`` in a raw user config; values of ``None`` are ignored."""
    result = copy.deepcopy(raw)
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        node = result
        parts = dotted.split(".")
        for part in parts[:-1]:
            child = node.get(part)
            if child is None:
                child = node[part] = {}
            elif not isinstance(child, dict):
                raise ConfigError(dotted, f"'{part}' is not a mapping")
            node = child
        node[parts[-1]] = value
    return result
