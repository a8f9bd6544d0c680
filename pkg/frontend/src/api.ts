// Typed client for the game service. Everything the UI knows about a
// game comes through these calls; the shapes below mirror the service's
// JSON payloads exactly.

export interface MoveItem {
    player: "X" | "O";
    row: number;
    col: number;
}

export interface GameState {
    id: string;
    n: number;
    variant: "strong" | "maker-breaker";
    engines: { X: string; O: string };
    board: string[];            // n rows, top first; chars X, O, .
    moves: MoveItem[];
    to_move: "X" | "O" | null;
    over: boolean;
    winner: "X" | "O" | null;
    draw: boolean;
    adjudicated: boolean;
    winning_cells: [number, number][] | null;
}

export interface MoveReply extends GameState {
    engine_move: [number, number] | null;
}

export interface Analysis {
    threats_x: [number, number][];
    threats_o: [number, number][];
    matching_x: number;
    matching_o: number;
    can_win_x: boolean;
    can_win_o: boolean;
    value: string | null;
}

export interface GameSummary {
    id: string;
    n: number;
    variant: string;
    engines: { X: string; O: string };
    over: boolean;
    winner: string | null;
    moves_played: number;
}

// What the view needs from a client; tests substitute stubs.
export interface GameService {
    createGame(n: number, variant: string, engine: string, enginePlays: string): Promise<GameState>;
    getGame(id: string): Promise<GameState>;
    sendMove(id: string, row: number, col: number): Promise<MoveReply>;
    getAnalysis(id: string): Promise<Analysis>;
}

export class ServiceError extends Error {
    constructor(readonly status: number, readonly code: string, message: string) {
        super(message);
        this.name = "ServiceError";
    }
}

export class ApiClient implements GameService {
    constructor(
        private baseUrl: string = "",
        private fetchFn: typeof fetch = (...args) => fetch(...args),
    ) {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = { method };
        if (body !== undefined) {
            init.headers = { "Content-Type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const res = await this.fetchFn(this.baseUrl + path, init);
        if (!res.ok) {
            let code = "http-" + res.status;
            let message = res.statusText || code;
            try {
                const data = await res.json();
                if (data && data.error) {
                    code = data.error.code;
                    message = data.error.message;
                }
            } catch {
                // non-JSON error body; keep the status text
            }
            throw new ServiceError(res.status, code, message);
        }
        if (res.status === 204) {
            return undefined as T;
        }
        return (await res.json()) as T;
    }

    createGame(n: number, variant: string, engine: string, enginePlays: string): Promise<GameState> {
        return this.request<GameState>("POST", "/games", {
            n: n,
            variant: variant,
            engine: engine,
            engine_plays: enginePlays,
        });
    }

    listGames(): Promise<{ games: GameSummary[] }> {
        return this.request("GET", "/games");
    }

    getGame(id: string): Promise<GameState> {
        return this.request("GET", `/games/${id}`);
    }

    deleteGame(id: string): Promise<void> {
        return this.request("DELETE", `/games/${id}`);
    }

    sendMove(id: string, row: number, col: number): Promise<MoveReply> {
        return this.request("POST", `/games/${id}/moves`, { row: row, col: col });
    }

    getAnalysis(id: string): Promise<Analysis> {
        return this.request("GET", `/games/${id}/analysis`);
    }
}
