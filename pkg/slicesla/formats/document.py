"""YAML documents with source lines for error reporting."""
from typing import Any
from typing import Optional
from typing import Tuple

import yaml


class YamlSyntaxError(ValueError):
    def __init__(self, message: str, line: Optional[int]) -> None:
        self.line = line
        super().__init__(message)


def load_yaml(text: str) -> Tuple[Any, Optional[yaml.Node]]:
    """Return the document and its node tree (None for an empty document)."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        doc = yaml.safe_load(text)
    except yaml.YAMLError as error:
        mark = getattr(error, "problem_mark", None)
        raise YamlSyntaxError(str(error).replace("\n", " "), mark.line + 1 if mark else None)
    return doc, node


def field_line(node: Optional[yaml.Node], field: str) -> Optional[int]:
    """Line of the deepest node reached by the slash separated field path."""
    if node is None:
        return None
    line = node.start_mark.line + 1
    for part in field.strip("/").split("/"):
        if not part:
            break
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                if str(key.value) == part:
                    line, node = key.start_mark.line + 1, value
                    break
            else:
                return line
        elif isinstance(node, yaml.SequenceNode) and part.isdigit() and int(part) < len(node.value):
            node = node.value[int(part)]
            line = node.start_mark.line + 1
        else:
            return line
    return line


def dump_yaml(doc: Any) -> str:
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False, allow_unicode=True)
