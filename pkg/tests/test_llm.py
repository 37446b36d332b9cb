import httpx
import pytest

from mock_llm import GOOD_REPLY, completion, mock_server, unused_port
from logicaug.formula import VarTable, parse_formula
from logicaug.llm import (
    LLMAuthError, LLMConfig, LLMError, LLMNetworkError, LLMOutputError, instantiate_many,
    llm_instantiate, parse_reply,
)
from logicaug.pairs import IMPLICATION, SamplePair
from logicaug.search import DerivationPath
from logicaug.verbalize import emit_prompt

P = parse_formula


@pytest.fixture
def spec():
    vt = VarTable()
    vt.intern("rain")
    vt.intern("ground wet")
    a = P("(a -> b) & a")
    return emit_prompt(SamplePair(a, P("b"), 1, IMPLICATION, DerivationPath(a)), vt)


def no_sleep(_seconds):
    pass


def test_reachable_endpoint(spec):
    with mock_server() as (url, requests):
        cfg = LLMConfig(url, model="mock", api_key="k")
        out = llm_instantiate(spec, cfg, sleep=no_sleep)
    assert out == {"text_a": "If it rains, the ground gets wet, and it rains.", "text_b": "The ground gets wet."}
    (req,) = requests
    assert req["path"] == "/v1/chat/completions"
    assert req["auth"] == "Bearer k"
    assert req["body"]["temperature"] == 0.7
    assert req["body"]["model"] == "mock"
    assert [m["role"] for m in req["body"]["messages"]] == ["system", "user"]


def test_unreachable_endpoint_retries_three_times(spec):
    sleeps = []
    cfg = LLMConfig(f"http://127.0.0.1:{unused_port()}/v1", timeout=2)
    with pytest.raises(LLMNetworkError, match="after 3 retries"):
        llm_instantiate(spec, cfg, sleep=sleeps.append)
    assert sleeps == [0.5, 1.0, 2.0]


def test_attempt_count_with_transport():
    calls = []

    def handler(request):
        calls.append(request)
        raise httpx.ConnectError("refused", request=request)

    client = httpx.Client(transport=httpx.MockTransport(handler))
    vt = VarTable()
    vt.intern("rain")
    s = emit_prompt(SamplePair(P("a"), P("a"), 1, IMPLICATION, DerivationPath(P("a"))), vt)
    with pytest.raises(LLMNetworkError):
        llm_instantiate(s, LLMConfig("http://x"), client=client, sleep=no_sleep)
    assert len(calls) == 4  # first attempt plus three retries


def test_transient_errors_then_success(spec):
    with mock_server([(503, {}), (429, {})]) as (url, requests):
        out = llm_instantiate(spec, LLMConfig(url), sleep=no_sleep)
    assert len(requests) == 3 and out["text_b"] == "The ground gets wet."


def test_server_errors_exhaust_retries(spec):
    with mock_server(default=(500, {})) as (url, requests):
        with pytest.raises(LLMNetworkError):
            llm_instantiate(spec, LLMConfig(url), sleep=no_sleep)
    assert len(requests) == 4


@pytest.mark.parametrize("status", [401, 403])
def test_auth_failure_is_not_retried(spec, status):
    with mock_server(default=(status, {"error": "nope"})) as (url, requests):
        with pytest.raises(LLMAuthError):
            llm_instantiate(spec, LLMConfig(url), sleep=no_sleep)
    assert len(requests) == 1


def test_missing_field_is_output_error(spec):
    with mock_server(default=(200, completion('{"text_a": "only one"}'))) as (url, _):
        with pytest.raises(LLMOutputError, match="text_b"):
            llm_instantiate(spec, LLMConfig(url), sleep=no_sleep)


def test_non_chat_body_is_output_error(spec):
    with mock_server(default=(200, {"unexpected": True})) as (url, _):
        with pytest.raises(LLMOutputError):
            llm_instantiate(spec, LLMConfig(url), sleep=no_sleep)


@pytest.mark.parametrize("content", [
    '{"text_a": "A.", "text_b": "B."}',
    'Sure!\n```json\n{"text_a": "A.", "text_b": "B."}\n```',
    '```\n{"text_a": " A. ", "text_b": "B."}\n```',
])
def test_parse_reply_variants(content):
    assert parse_reply(content) == {"text_a": "A.", "text_b": "B."}


@pytest.mark.parametrize("content", ["no json here", "{broken", '{"text_a": "", "text_b": "B"}', "[1, 2]"])
def test_parse_reply_rejects(content):
    with pytest.raises(LLMOutputError):
        parse_reply(content)


def test_from_env():
    env = {"LFCDA_LLM_ENDPOINT": "http://h/v1", "LFCDA_LLM_MODEL": "m", "LFCDA_LLM_KEY": "s"}
    cfg = LLMConfig.from_env(env)
    assert (cfg.endpoint, cfg.model, cfg.api_key, cfg.temperature, cfg.max_retries) == ("http://h/v1", "m", "s", 0.7, 3)
    assert LLMConfig.from_env(env, temperature=0.2).temperature == 0.2
    with pytest.raises(LLMError):
        LLMConfig.from_env({})


def test_many_keeps_input_order_and_collects_failures(spec):
    script = [(200, completion(GOOD_REPLY)), (200, completion("garbage"))]
    with mock_server(script) as (url, _):
        cfg = LLMConfig(url, max_in_flight=1)
        out = instantiate_many([spec, spec, spec], cfg, return_exceptions=True, sleep=no_sleep)
    assert isinstance(out[1], LLMOutputError)
    assert out[0] == out[2] and out[0]["text_a"]


def test_many_concurrent(spec):
    with mock_server() as (url, requests):
        out = instantiate_many([spec] * 10, LLMConfig(url), sleep=no_sleep)
    assert len(out) == 10 and len(requests) == 10
