"""The typing judgment over a global environment of declarations."""

from .declarations import (RecordDecl, begin_section, declare_axiom, declare_definition,
                           declare_inductive_in_scope, declare_record, declare_variable,
                           end_section, transaction)
from .env import (Axiom, Constructor, Definition, GlobalEnv, Inductive, Recursor, SectionFrame,
                  SectionVar)
from .inductive import InductiveDecl, declare_inductive, eliminator_targets
from .profiles import BUILTIN, ElimPolicy, Family, Profile, UnknownProfile, get_profile
from .typing import Checker, check_type, infer_type, product_sort

__all__ = [
    "Axiom", "BUILTIN", "Checker", "Constructor", "Definition", "ElimPolicy", "Family",
    "GlobalEnv", "Inductive", "InductiveDecl", "Profile", "RecordDecl", "Recursor",
    "SectionFrame", "SectionVar", "UnknownProfile", "begin_section", "check_type",
    "declare_axiom", "declare_definition", "declare_inductive", "declare_inductive_in_scope",
    "declare_record", "declare_variable", "eliminator_targets", "end_section", "get_profile",
    "infer_type", "product_sort", "transaction",
]
