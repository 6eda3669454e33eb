"""Default signature-to-stage rules and the bundled port/service registry.

Both tables are best-effort defaults and can be replaced by JSON config
files (see README for the schemas). Rule evaluation is first-match-wins:
the default table matches on the Suricata-style category first, then on
signature substrings, and always falls back to (Unknown, Low).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import ConfigError
from .stages import DEFAULT_SEVERITY, MicroAIS, SeverityLevel


@dataclass(frozen=True)
class MappingRule:
    """One matcher: exactly one of category / signature_substring / signature_id."""

    micro: MicroAIS
    severity: SeverityLevel
    category: Optional[str] = None
    signature_substring: Optional[str] = None
    signature_id: Optional[int] = None

    def matches(self, signature: str, signature_id: int, category: str) -> bool:
        if self.category is not None:
            return self.category.lower() == category.lower()
        if self.signature_substring is not None:
            return self.signature_substring.lower() in signature.lower()
        if self.signature_id is not None:
            return self.signature_id == signature_id
        return False


@dataclass(frozen=True)
class AISMapping:
    """Ordered rule list; total because of the fixed fallback."""

    rules: tuple[MappingRule, ...]
    fallback_micro: MicroAIS = MicroAIS.UNKNOWN
    fallback_severity: SeverityLevel = SeverityLevel.LOW


def _rule(micro: MicroAIS, **kwargs) -> MappingRule:
    return MappingRule(micro=micro, severity=DEFAULT_SEVERITY[micro], **kwargs)


# Category rules cover the common Suricata classtype messages; signature
# substring rules catch specific exploits the categories label too coarsely.
DEFAULT_RULES: tuple[MappingRule, ...] = (
    _rule(MicroAIS.SERVICE_DISCOVERY, category="Detection of a Network Scan"),
    _rule(MicroAIS.ACTIVE_RECONNAISSANCE, category="Potentially Bad Traffic"),
    _rule(MicroAIS.VULNERABILITY_DISCOVERY, category="access to a potentially vulnerable web application"),
    _rule(MicroAIS.INFORMATION_DISCOVERY, category="Attempted Information Leak"),
    _rule(MicroAIS.INFORMATION_DISCOVERY, category="Information Leak"),
    _rule(MicroAIS.SERVICE_EXPLOITATION, category="Web Application Attack"),
    _rule(MicroAIS.USER_PRIVILEGE_ESCALATION, category="Attempted User Privilege Gain"),
    _rule(MicroAIS.USER_PRIVILEGE_ESCALATION, category="Successful User Privilege Gain"),
    _rule(MicroAIS.ROOT_PRIVILEGE_ESCALATION, category="Attempted Administrator Privilege Gain"),
    _rule(MicroAIS.ROOT_PRIVILEGE_ESCALATION, category="Successful Administrator Privilege Gain"),
    _rule(MicroAIS.NETWORK_DOS, category="Attempted Denial of Service"),
    _rule(MicroAIS.NETWORK_DOS, category="Denial of Service"),
    _rule(MicroAIS.DATA_DELIVERY, category="A Network Trojan was detected"),
    _rule(MicroAIS.DATA_DELIVERY, category="Malware Command and Control Activity Detected"),
    _rule(MicroAIS.DATA_EXFILTRATION, category="Potential Corporate Privacy Violation"),
    _rule(MicroAIS.ARBITRARY_CODE_EXECUTION, category="Executable code was detected"),
    _rule(MicroAIS.BRUTE_FORCE_CREDENTIALS, category="Attempted Account Compromise"),
    _rule(MicroAIS.ROOT_PRIVILEGE_ESCALATION, signature_substring="CodeRed"),
    _rule(MicroAIS.ROOT_PRIVILEGE_ESCALATION, signature_substring="root.exe"),
    _rule(MicroAIS.ROOT_PRIVILEGE_ESCALATION, signature_substring="ColdFusion administrator access"),
    _rule(MicroAIS.ROOT_PRIVILEGE_ESCALATION, signature_substring="nativeHelper"),
    _rule(MicroAIS.DATA_EXFILTRATION, signature_substring="MongoDB Database numeration"),
    _rule(MicroAIS.DATA_EXFILTRATION, signature_substring="Database Dump"),
    _rule(MicroAIS.DATA_EXFILTRATION, signature_substring="Exfiltration"),
    _rule(MicroAIS.DATA_MANIPULATION, signature_substring="SQL Injection UPDATE"),
    _rule(MicroAIS.DATA_MANIPULATION, signature_substring="SQL Injection INSERT"),
    _rule(MicroAIS.DATA_MANIPULATION, signature_substring="Document Update Request"),
    _rule(MicroAIS.ACCOUNT_MANIPULATION, signature_substring="Account Creation"),
    _rule(MicroAIS.ACCOUNT_MANIPULATION, signature_substring="useradd"),
    _rule(MicroAIS.RESOURCE_HIJACKING, signature_substring="Crypto Currency Mining"),
    _rule(MicroAIS.RESOURCE_HIJACKING, signature_substring="CoinMiner"),
    _rule(MicroAIS.BRUTE_FORCE_CREDENTIALS, signature_substring="Brute Force"),
    _rule(MicroAIS.BRUTE_FORCE_CREDENTIALS, signature_substring="Bad Login"),
    _rule(MicroAIS.SERVICE_DISCOVERY, signature_substring="Nmap"),
    _rule(MicroAIS.SERVICE_DISCOVERY, signature_substring="Nikto"),
    _rule(MicroAIS.HOST_DISCOVERY, signature_substring="Ping Sweep"),
    _rule(MicroAIS.HOST_DISCOVERY, signature_substring="ICMP PING"),
    _rule(MicroAIS.COMMAND_AND_CONTROL, signature_substring="CnC Beacon"),
    _rule(MicroAIS.PHISHING, signature_substring="Phishing"),
    _rule(MicroAIS.DATA_DESTRUCTION, signature_substring="Data Destruction"),
    _rule(MicroAIS.SERVICE_STOP, signature_substring="Service Stop"),
    _rule(MicroAIS.DATA_DISTORTION, signature_substring="Data Distortion"),
)

DEFAULT_MAPPING = AISMapping(rules=DEFAULT_RULES)

# Snapshot of well-known service names by destination port. Unlisted ports
# fall back to "port-<n>".
DEFAULT_PORT_SERVICES: dict[int, str] = {
    20: "ftp-data",
    21: "ftp",
    22: "ssh",
    23: "telnet",
    25: "smtp",
    53: "domain",
    67: "bootps",
    69: "tftp",
    80: "http",
    88: "kerberos",
    110: "pop3",
    111: "sunrpc",
    123: "ntp",
    135: "epmap",
    137: "netbios-ns",
    139: "netbios-ssn",
    143: "imap",
    161: "snmp",
    389: "ldap",
    443: "https",
    445: "microsoft-ds",
    465: "submissions",
    514: "syslog",
    587: "submission",
    631: "ipp",
    636: "ldaps",
    873: "rsync",
    902: "ideafarm-door",
    993: "imaps",
    995: "pop3s",
    1080: "socks",
    1433: "ms-sql-s",
    1521: "ncube-lm",
    1723: "pptp",
    2049: "nfs",
    2375: "docker",
    3000: "remoteware-cl",
    3128: "ndl-aas",
    3306: "mysql",
    3389: "ms-wbt-server",
    4369: "epmd",
    5000: "commplex-main",
    5026: "etlservicemgr",
    5060: "sip",
    5432: "postgresql",
    5601: "esmagent",
    5671: "amqps",
    5672: "amqp",
    5900: "rfb",
    5984: "couchdb",
    6379: "redis",
    6667: "ircd",
    8000: "irdmi",
    8080: "http-alt",
    8443: "pcsync-https",
    8888: "ddi-tcp-1",
    9090: "websm",
    9200: "wap-wsp",
    11211: "memcache",
    27017: "mongodb",
}


@dataclass(frozen=True)
class PortServiceTable:
    services: dict[int, str]

    def name(self, port: int) -> str:
        return self.services.get(port, f"port-{port}")


DEFAULT_PORT_TABLE = PortServiceTable(services=DEFAULT_PORT_SERVICES)


def load_mapping(path: str | Path) -> AISMapping:
    """Read an AIS mapping override file (JSON, documented in README)."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read mapping file {path}: {exc}") from exc
    rules = []
    for i, entry in enumerate(doc.get("rules", [])):
        try:
            micro = MicroAIS(entry["micro"])
            severity = (
                SeverityLevel(entry["severity"])
                if "severity" in entry
                else DEFAULT_SEVERITY[micro]
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"mapping rule {i}: {exc}") from exc
        matchers = {
            k: entry[k]
            for k in ("category", "signature_substring", "signature_id")
            if k in entry
        }
        if len(matchers) != 1:
            raise ConfigError(f"mapping rule {i}: exactly one matcher required")
        rules.append(MappingRule(micro=micro, severity=severity, **matchers))
    return AISMapping(rules=tuple(rules))


def load_port_table(path: str | Path) -> PortServiceTable:
    """Read a port/service override file: {"services": {"80": "http", ...}}."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read port table {path}: {exc}") from exc
    services = {}
    for port, name in doc.get("services", {}).items():
        try:
            port_num = int(port)
        except ValueError as exc:
            raise ConfigError(f"port table: bad port {port!r}") from exc
        if not 0 <= port_num <= 65535:
            raise ConfigError(f"port table: port {port_num} out of range")
        services[port_num] = str(name)
    return PortServiceTable(services=services)
