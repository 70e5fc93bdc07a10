import logging

from flask import Blueprint, current_app, jsonify, request

from .config import engine_config_from_app
from .decorators.errors import domain_errors
from .services import reports
from .utils.errors import DomainError, GroupSpecError

api_blueprint = Blueprint("api", __name__)

# verification mismatch is a result, not an error
MISMATCH_STATUS = 409


def _int_arg(name, required=False):
    raw = request.args.get(name)
    if raw is None or raw == "":
        if required:
            raise DomainError(f"missing query parameter {name!r}")
        return None
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"query parameter {name!r} must be an integer, got {raw!r}")


def _spec():
    spec = request.args.get("spec")
    if not spec:
        raise GroupSpecError("missing query parameter 'spec'")
    return spec


def _config():
    cap = _int_arg("oracle_cap")
    if cap is not None and cap < 1:
        raise DomainError("oracle_cap must be positive")
    return engine_config_from_app(current_app, cap)


def respond(report):
    """
    Wrap a report payload in the API envelope.

    Returns:
        response: A tuple containing a JSON response and an HTTP status code.
    """
    body = {"status": "ok", **report.payload}
    if report.lines:
        body["lines"] = report.lines
    if report.exit_code == reports.EXIT_MISMATCH:
        logging.info(f"Verification mismatch for {report.payload.get('input')!r}")
        return jsonify(body), MISMATCH_STATUS
    return jsonify(body), 200


def _flag(name):
    return request.args.get(name, "").lower() in ("1", "true", "yes")


@api_blueprint.route("/health", methods=["GET"])
def health():
    return jsonify({"status": "ok"}), 200


@api_blueprint.route("/dm", methods=["GET"])
@domain_errors
def dm_get():
    method = request.args.get("method", "auto")
    return respond(reports.cmd_dm(_spec(), _config(), method, _flag("list")))


@api_blueprint.route("/verify", methods=["GET"])
@domain_errors
def verify_get():
    return respond(reports.cmd_verify(_spec(), _config()))


@api_blueprint.route("/sections", methods=["GET"])
@domain_errors
def sections_get():
    return respond(reports.cmd_sections(_spec(), _config()))


@api_blueprint.route("/aut", methods=["GET"])
@domain_errors
def aut_get():
    return respond(reports.cmd_aut(_spec(), _config(), _flag("brute_force")))


@api_blueprint.route("/subgroups", methods=["GET"])
@domain_errors
def subgroups_get():
    return respond(reports.cmd_subgroups(_spec(), _config(), _flag("by_type"), _flag("dump")))


@api_blueprint.route("/survey", methods=["GET"])
@domain_errors
def survey_get():
    sort = request.args.get("sort", "lex")
    if sort not in ("lex", "dm"):
        raise DomainError(f"sort must be 'lex' or 'dm', got {sort!r}")
    prime = _int_arg("prime", required=True)
    exponent = _int_arg("exponent", required=True)
    return respond(reports.cmd_survey(prime, exponent, _config(), sort))
