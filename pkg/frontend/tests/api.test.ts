import { describe, expect, it } from "vitest";

import { ApiClient, ServiceError } from "../src/api.js";

interface Call {
    url: string;
    init?: RequestInit;
}

function fakeFetch(status: number, body: unknown, calls: Call[]): typeof fetch {
    return async (input: RequestInfo | URL, init?: RequestInit) => {
        calls.push({ url: String(input), init: init });
        return {
            ok: status >= 200 && status < 300,
            status: status,
            statusText: "status " + status,
            json: async () => {
                if (body === undefined) {
                    throw new Error("no body");
                }
                return body;
            },
        } as Response;
    };
}

describe("ApiClient", () => {
    it("posts game creation with the service's field names", async () => {
        const calls: Call[] = [];
        const state = { id: "abc", n: 4, board: ["....", "....", "....", "...."] };
        const client = new ApiClient("http://host:1", fakeFetch(201, state, calls));
        const got = await client.createGame(4, "strong", "theorem1", "first");
        expect(got.id).toBe("abc");
        expect(calls).toHaveLength(1);
        expect(calls[0].url).toBe("http://host:1/games");
        expect(calls[0].init?.method).toBe("POST");
        expect(JSON.parse(String(calls[0].init?.body))).toEqual({
            n: 4,
            variant: "strong",
            engine: "theorem1",
            engine_plays: "first",
        });
    });

    it("sends moves to the game's move collection", async () => {
        const calls: Call[] = [];
        const client = new ApiClient("", fakeFetch(200, { engine_move: null }, calls));
        await client.sendMove("abc", 2, 3);
        expect(calls[0].url).toBe("/games/abc/moves");
        expect(JSON.parse(String(calls[0].init?.body))).toEqual({ row: 2, col: 3 });
    });

    it("reads analysis and state with GET", async () => {
        const calls: Call[] = [];
        const client = new ApiClient("", fakeFetch(200, {}, calls));
        await client.getGame("g");
        await client.getAnalysis("g");
        expect(calls.map((c) => c.url)).toEqual(["/games/g", "/games/g/analysis"]);
        expect(calls[0].init?.method).toBe("GET");
    });

    it("unwraps the service's error envelope", async () => {
        const envelope = { error: { code: "occupied", message: "cell (1, 1) is occupied" } };
        const client = new ApiClient("", fakeFetch(409, envelope, []));
        const err = await client.sendMove("g", 1, 1).catch((e) => e);
        expect(err).toBeInstanceOf(ServiceError);
        expect(err.status).toBe(409);
        expect(err.code).toBe("occupied");
        expect(err.message).toBe("cell (1, 1) is occupied");
    });

    it("falls back to the HTTP status when the error body is not JSON", async () => {
        const client = new ApiClient("", fakeFetch(500, undefined, []));
        const err = await client.getGame("g").catch((e) => e);
        expect(err).toBeInstanceOf(ServiceError);
        expect(err.code).toBe("http-500");
    });

    it("treats 204 responses as empty", async () => {
        const client = new ApiClient("", fakeFetch(204, undefined, []));
        await expect(client.deleteGame("g")).resolves.toBeUndefined();
    });
});
