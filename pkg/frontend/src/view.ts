// Game view: renders service state into the DOM and funnels clicks back
// to the service. All game knowledge lives server-side; the only rule
// applied locally is "don't send a move to an occupied cell".

import { Analysis, GameService, GameState, ServiceError } from "./api.js";

function cellLabel(row: number, col: number): string {
    return `(${row}, ${col})`;
}

export class GameView {
    state: GameState | null = null;
    analysis: Analysis | null = null;

    private errorText: string | null = null;
    private noteText: string | null = null;
    private retryAction: (() => Promise<void>) | null = null;
    private busy = false;

    private banner: HTMLElement;
    private turnLine: HTMLElement;
    private noteLine: HTMLElement;
    private gridBox: HTMLElement;
    private historyList: HTMLElement;

    constructor(readonly root: HTMLElement, readonly service: GameService) {
        this.banner = document.createElement("div");
        this.banner.className = "banner";
        this.turnLine = document.createElement("div");
        this.turnLine.className = "turn";
        this.noteLine = document.createElement("div");
        this.noteLine.className = "note";
        this.gridBox = document.createElement("div");
        this.gridBox.className = "grid";
        this.historyList = document.createElement("ol");
        this.historyList.className = "history";
        root.append(this.banner, this.turnLine, this.noteLine, this.gridBox, this.historyList);

        // one delegated listener; individual cells carry their coordinates
        this.gridBox.addEventListener("click", (event) => {
            const target = (event.target as HTMLElement).closest("td[data-row]");
            if (target) {
                const row = Number(target.getAttribute("data-row"));
                const col = Number(target.getAttribute("data-col"));
                void this.submitMove(row, col);
            }
        });

        this.render();
    }

    async startGame(n: number, engine: string, enginePlays: string, variant = "strong"): Promise<void> {
        this.retryAction = () => this.startGame(n, engine, enginePlays, variant);
        this.state = null;
        this.analysis = null;
        this.noteText = null;
        this.errorText = null;
        try {
            const state = await this.service.createGame(n, variant, engine, enginePlays);
            this.state = state;
            this.analysis = await this.service.getAnalysis(state.id);
            this.retryAction = null;
            if (state.moves.length > 0) {
                const opening = state.moves[state.moves.length - 1];
                this.noteText = `engine opened at ${cellLabel(opening.row, opening.col)}`;
            }
        } catch (err) {
            this.state = null;
            this.errorText = this.describe(err);
        }
        this.render();
    }

    async submitMove(row: number, col: number): Promise<void> {
        const state = this.state;
        if (!state || state.over || this.busy) {
            return;
        }
        if (state.to_move === null || state.engines[state.to_move] !== "human") {
            return; // engine's turn; the service moves for it
        }
        const owner = state.board[row - 1][col - 1];
        if (owner !== ".") {
            // the one local rule: occupied cells never produce a request
            this.noteText = `cell ${cellLabel(row, col)} is taken`;
            this.render();
            return;
        }
        this.busy = true;
        try {
            const reply = await this.service.sendMove(state.id, row, col);
            this.noteText = reply.engine_move
                ? `engine played ${cellLabel(reply.engine_move[0], reply.engine_move[1])}`
                : null;
            await this.refresh();
        } catch (err) {
            if (err instanceof ServiceError) {
                // stale or rejected move: surface it and re-sync with the service
                this.noteText = err.message;
                try {
                    await this.refresh();
                } catch (refreshErr) {
                    this.errorText = this.describe(refreshErr);
                }
            } else {
                this.errorText = this.describe(err);
                this.retryAction = () => this.refreshAndRender();
            }
        } finally {
            this.busy = false;
        }
        this.render();
    }

    // authoritative re-read of both endpoints; rendered cells always come
    // from the latest GET
    async refresh(): Promise<void> {
        if (!this.state) {
            return;
        }
        const id = this.state.id;
        this.state = await this.service.getGame(id);
        this.analysis = await this.service.getAnalysis(id);
        this.errorText = null;
    }

    private async refreshAndRender(): Promise<void> {
        try {
            await this.refresh();
            this.retryAction = null;
        } catch (err) {
            this.errorText = this.describe(err);
        }
        this.render();
    }

    retry(): Promise<void> {
        return this.retryAction ? this.retryAction() : Promise.resolve();
    }

    cellAt(row: number, col: number): HTMLElement | null {
        return this.gridBox.querySelector(`td[data-row="${row}"][data-col="${col}"]`);
    }

    private describe(err: unknown): string {
        if (err instanceof ServiceError) {
            return err.message;
        }
        return "service unreachable";
    }

    render(): void {
        const state = this.state;

        if (this.errorText !== null) {
            this.banner.className = "banner error";
            this.banner.textContent = this.errorText;
            if (this.retryAction) {
                const button = document.createElement("button");
                button.className = "retry";
                button.textContent = "retry";
                button.addEventListener("click", () => void this.retry());
                this.banner.append(" ", button);
            }
        } else if (state && state.over) {
            if (state.winner) {
                this.banner.className = "banner win";
                this.banner.textContent = state.adjudicated
                    ? `${state.winner} wins (adjudicated)`
                    : `${state.winner} wins`;
            } else {
                this.banner.className = "banner draw";
                this.banner.textContent = "draw";
            }
        } else {
            this.banner.className = "banner";
            this.banner.textContent = "";
        }

        if (state && !state.over && state.to_move) {
            const mover = state.engines[state.to_move];
            this.turnLine.textContent =
                mover === "human"
                    ? `your move (${state.to_move})`
                    : `engine to move (${mover})`;
        } else {
            this.turnLine.textContent = "";
        }

        this.noteLine.textContent = this.noteText ?? "";

        this.gridBox.textContent = "";
        if (state && this.errorText === null) {
            this.gridBox.appendChild(this.buildGrid(state));
        }

        this.historyList.textContent = "";
        if (state) {
            for (const move of state.moves) {
                const item = document.createElement("li");
                item.textContent = `${move.player} ${cellLabel(move.row, move.col)}`;
                this.historyList.appendChild(item);
            }
        }
    }

    private buildGrid(state: GameState): HTMLTableElement {
        const threatsX = new Set(
            (this.analysis?.threats_x ?? []).map(([r, c]) => `${r},${c}`),
        );
        const threatsO = new Set(
            (this.analysis?.threats_o ?? []).map(([r, c]) => `${r},${c}`),
        );
        const winning = new Set(
            (state.winning_cells ?? []).map(([r, c]) => `${r},${c}`),
        );

        const table = document.createElement("table");
        table.className = "board";
        // row 1 at the top, column 1 at the left
        for (let row = 1; row <= state.n; row++) {
            const tr = document.createElement("tr");
            for (let col = 1; col <= state.n; col++) {
                const td = document.createElement("td");
                td.setAttribute("data-row", String(row));
                td.setAttribute("data-col", String(col));
                const owner = state.board[row - 1][col - 1];
                const classes = ["cell"];
                if (owner === "X") {
                    classes.push("x");
                    td.textContent = "X";
                } else if (owner === "O") {
                    classes.push("o");
                    td.textContent = "O";
                } else {
                    classes.push("empty");
                }
                const key = `${row},${col}`;
                if (threatsX.has(key)) {
                    classes.push("threat-x");
                }
                if (threatsO.has(key)) {
                    classes.push("threat-o");
                }
                if (winning.has(key)) {
                    classes.push("win");
                }
                td.className = classes.join(" ");
                tr.appendChild(td);
            }
            table.appendChild(tr);
        }
        return table;
    }
}
