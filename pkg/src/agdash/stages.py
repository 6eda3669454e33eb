"""Attack stage taxonomy: techniques, tactics, and default severities.

Micro stages are the techniques an alert can be mapped to; each belongs to
exactly one Macro (tactic) column and carries a default severity that drives
node shapes and objective detection. Severity levels stay overridable through
the urgency configuration.
"""

from __future__ import annotations

from enum import Enum


class SeverityLevel(str, Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class MacroAIS(str, Enum):
    RECONNAISSANCE = "Reconnaissance"
    DISCOVERY = "Discovery"
    CREDENTIAL_ACCESS = "Credential Access"
    PRIVILEGE_ESCALATION = "Privilege Escalation"
    EXECUTION = "Execution"
    DISRUPTION = "Disruption"
    DISTORTION = "Distortion"
    EXFILTRATION = "Exfiltration"
    DELIVERY = "Delivery"
    UNKNOWN = "Unknown"


class MicroAIS(str, Enum):
    PASSIVE_RECONNAISSANCE = "Passive Reconnaissance"
    ACTIVE_RECONNAISSANCE = "Active Reconnaissance"
    HOST_DISCOVERY = "Host Discovery"
    SERVICE_DISCOVERY = "Service Discovery"
    VULNERABILITY_DISCOVERY = "Vulnerability Discovery"
    INFORMATION_DISCOVERY = "Information Discovery"
    BRUTE_FORCE_CREDENTIALS = "Brute Force Credentials"
    ACCOUNT_MANIPULATION = "Account Manipulation"
    USER_PRIVILEGE_ESCALATION = "User Privilege Escalation"
    ROOT_PRIVILEGE_ESCALATION = "Root Privilege Escalation"
    SERVICE_EXPLOITATION = "Service Exploitation"
    COMMAND_AND_CONTROL = "Command and Control"
    ARBITRARY_CODE_EXECUTION = "Arbitrary Code Execution"
    SERVICE_STOP = "Service Stop"
    NETWORK_DOS = "Network DoS"
    RESOURCE_HIJACKING = "Resource Hijacking"
    DATA_DISTORTION = "Data Distortion"
    DATA_MANIPULATION = "Data Manipulation"
    DATA_DESTRUCTION = "Data Destruction"
    DATA_EXFILTRATION = "Data Exfiltration"
    DATA_DELIVERY = "Data Delivery"
    PHISHING = "Phishing"
    UNKNOWN = "Unknown"


MICRO_TO_MACRO: dict[MicroAIS, MacroAIS] = {
    MicroAIS.PASSIVE_RECONNAISSANCE: MacroAIS.RECONNAISSANCE,
    MicroAIS.ACTIVE_RECONNAISSANCE: MacroAIS.RECONNAISSANCE,
    MicroAIS.HOST_DISCOVERY: MacroAIS.DISCOVERY,
    MicroAIS.SERVICE_DISCOVERY: MacroAIS.DISCOVERY,
    MicroAIS.VULNERABILITY_DISCOVERY: MacroAIS.DISCOVERY,
    MicroAIS.INFORMATION_DISCOVERY: MacroAIS.DISCOVERY,
    MicroAIS.BRUTE_FORCE_CREDENTIALS: MacroAIS.CREDENTIAL_ACCESS,
    MicroAIS.ACCOUNT_MANIPULATION: MacroAIS.CREDENTIAL_ACCESS,
    MicroAIS.USER_PRIVILEGE_ESCALATION: MacroAIS.PRIVILEGE_ESCALATION,
    MicroAIS.ROOT_PRIVILEGE_ESCALATION: MacroAIS.PRIVILEGE_ESCALATION,
    MicroAIS.SERVICE_EXPLOITATION: MacroAIS.EXECUTION,
    MicroAIS.COMMAND_AND_CONTROL: MacroAIS.EXECUTION,
    MicroAIS.ARBITRARY_CODE_EXECUTION: MacroAIS.EXECUTION,
    MicroAIS.SERVICE_STOP: MacroAIS.DISRUPTION,
    MicroAIS.NETWORK_DOS: MacroAIS.DISRUPTION,
    MicroAIS.RESOURCE_HIJACKING: MacroAIS.DISRUPTION,
    MicroAIS.DATA_DISTORTION: MacroAIS.DISTORTION,
    MicroAIS.DATA_MANIPULATION: MacroAIS.DISTORTION,
    MicroAIS.DATA_DESTRUCTION: MacroAIS.DISTORTION,
    MicroAIS.DATA_EXFILTRATION: MacroAIS.EXFILTRATION,
    MicroAIS.DATA_DELIVERY: MacroAIS.DELIVERY,
    MicroAIS.PHISHING: MacroAIS.DELIVERY,
    MicroAIS.UNKNOWN: MacroAIS.UNKNOWN,
}

DEFAULT_SEVERITY: dict[MicroAIS, SeverityLevel] = {
    MicroAIS.PASSIVE_RECONNAISSANCE: SeverityLevel.LOW,
    MicroAIS.ACTIVE_RECONNAISSANCE: SeverityLevel.LOW,
    MicroAIS.HOST_DISCOVERY: SeverityLevel.LOW,
    MicroAIS.SERVICE_DISCOVERY: SeverityLevel.LOW,
    MicroAIS.VULNERABILITY_DISCOVERY: SeverityLevel.LOW,
    MicroAIS.INFORMATION_DISCOVERY: SeverityLevel.MEDIUM,
    MicroAIS.BRUTE_FORCE_CREDENTIALS: SeverityLevel.MEDIUM,
    MicroAIS.ACCOUNT_MANIPULATION: SeverityLevel.MEDIUM,
    MicroAIS.USER_PRIVILEGE_ESCALATION: SeverityLevel.MEDIUM,
    MicroAIS.ROOT_PRIVILEGE_ESCALATION: SeverityLevel.HIGH,
    MicroAIS.SERVICE_EXPLOITATION: SeverityLevel.MEDIUM,
    MicroAIS.COMMAND_AND_CONTROL: SeverityLevel.MEDIUM,
    MicroAIS.ARBITRARY_CODE_EXECUTION: SeverityLevel.HIGH,
    MicroAIS.SERVICE_STOP: SeverityLevel.MEDIUM,
    MicroAIS.NETWORK_DOS: SeverityLevel.HIGH,
    MicroAIS.RESOURCE_HIJACKING: SeverityLevel.HIGH,
    MicroAIS.DATA_DISTORTION: SeverityLevel.HIGH,
    MicroAIS.DATA_MANIPULATION: SeverityLevel.HIGH,
    MicroAIS.DATA_DESTRUCTION: SeverityLevel.HIGH,
    MicroAIS.DATA_EXFILTRATION: SeverityLevel.HIGH,
    MicroAIS.DATA_DELIVERY: SeverityLevel.HIGH,
    MicroAIS.PHISHING: SeverityLevel.MEDIUM,
    MicroAIS.UNKNOWN: SeverityLevel.LOW,
}

# Column order of the analyst matrix; micros render alphabetically below
# their macro.
MACRO_ORDER: tuple[MacroAIS, ...] = tuple(MacroAIS)


def macro_of(micro: MicroAIS) -> MacroAIS:
    return MICRO_TO_MACRO[micro]


def micros_of(macro: MacroAIS) -> list[MicroAIS]:
    found = [m for m, parent in MICRO_TO_MACRO.items() if parent is macro]
    return sorted(found, key=lambda m: m.value)
